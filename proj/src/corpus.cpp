// Copyright 2026 The LSC Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lsc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_map>

#include "lsc/error.hpp"
#include "lsc/text.hpp"
#include "lsc/tsv.hpp"

namespace lsc {

std::string to_string(Period p) { return p == Period::C1 ? "C1" : "C2"; }

Period parse_period(std::string_view s) {
  std::string v(trim(s));
  for (auto& c : v) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (v == "1" || v == "C1") return Period::C1;
  if (v == "2" || v == "C2") return Period::C2;
  throw FormatError("unknown period/grouping '" + std::string(s) + "' (expected 1, 2, C1 or C2)");
}

std::string to_string(Layer l) {
  switch (l) {
    case Layer::raw: return "raw";
    case Layer::token: return "token";
    case Layer::lemma: return "lemma";
    case Layer::pos: return "pos";
    case Layer::conllu: return "conllu";
  }
  return "?";
}

Layer parse_layer(std::string_view s) {
  for (Layer l : {Layer::raw, Layer::token, Layer::lemma, Layer::pos, Layer::conllu})
    if (to_string(l) == s) return l;
  throw FormatError("unknown layer '" + std::string(s) + "'");
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences_) n += s.tokens.size();
  return n;
}

namespace {

bool tokenized(const std::set<Layer>& layers) {
  return layers.count(Layer::token) || layers.count(Layer::lemma) || layers.count(Layer::pos) ||
         layers.count(Layer::conllu);
}

}  // namespace

void Corpus::merge(const Corpus& other) {
  if (other.period_ != period_) throw IntegrityError("cannot merge layers of different periods");
  if (sentences_.empty() && layers_.empty()) {
    sentences_ = other.sentences_;
    layers_ = other.layers_;
    return;
  }
  if (other.sentences_.size() != sentences_.size())
    throw IntegrityError("sentence count mismatch between layers: " + std::to_string(sentences_.size()) + " vs " +
                         std::to_string(other.sentences_.size()));
  const bool mine_tok = tokenized(layers_);
  const bool theirs_tok = tokenized(other.layers_);
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    auto& s = sentences_[i];
    const auto& o = other.sentences_[i];
    if (o.raw_text.size() && s.raw_text.empty()) s.raw_text = o.raw_text;
    if (!theirs_tok) continue;
    if (!mine_tok) {
      s.tokens = o.tokens;
      continue;
    }
    if (s.tokens.size() != o.tokens.size())
      throw IntegrityError("layer length mismatch in sentence " + s.sentence_id + ": " +
                           std::to_string(s.tokens.size()) + " vs " + std::to_string(o.tokens.size()) + " tokens");
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      auto& a = s.tokens[t];
      const auto& b = o.tokens[t];
      if (!b.surface.empty()) a.surface = b.surface;
      if (!b.lemma.empty()) a.lemma = b.lemma;
      if (!b.pos.empty()) a.pos = b.pos;
      if (!b.morph.empty()) a.morph = b.morph;
      if (!b.deprel.empty()) a.deprel = b.deprel;
      if (b.head >= 0) a.head = b.head;
    }
  }
  layers_.insert(other.layers_.begin(), other.layers_.end());
}

namespace {

Corpus load_lines(const std::filesystem::path& path, Layer layer, Period period) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open corpus file " + path.string());
  Corpus corpus(period);
  corpus.mark_layer(layer);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# ", 0) == 0) continue;
    if (trim(line).empty()) continue;
    SentenceRecord rec;
    rec.sentence_id = std::to_string(lineno);
    if (layer == Layer::raw) {
      rec.raw_text = std::string(trim(line));
    } else {
      for (auto& field : split_ws(line)) {
        Token tok;
        switch (layer) {
          case Layer::token: tok.surface = std::move(field); break;
          case Layer::lemma: tok.lemma = std::move(field); break;
          case Layer::pos: tok.pos = std::move(field); break;
          default: break;
        }
        rec.tokens.push_back(std::move(tok));
      }
    }
    corpus.add_sentence(std::move(rec));
  }
  return corpus;
}

FeatureMap parse_feats(const std::string& feats, const std::string& file, std::size_t lineno) {
  FeatureMap out;
  if (feats == "_" || feats.empty()) return out;
  for (const auto& kv : split(feats, '|')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size())
      throw ParseError(file, lineno, "malformed FEATS entry '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

Corpus load_conllu(const std::filesystem::path& path, Period period) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open CoNLL-U file " + path.string());
  const std::string file = path.string();
  Corpus corpus(period);
  for (Layer l : {Layer::token, Layer::lemma, Layer::pos, Layer::conllu}) corpus.mark_layer(l);

  SentenceRecord current;
  std::size_t ordinal = 0;
  std::size_t block_start = 0;
  auto flush = [&] {
    if (current.tokens.empty()) {
      if (!current.sentence_id.empty() || !current.raw_text.empty())
        throw ParseError(file, block_start, "sentence block without tokens");
      return;
    }
    ++ordinal;
    if (current.sentence_id.empty()) current.sentence_id = std::to_string(ordinal);
    corpus.add_sentence(std::move(current));
    current = SentenceRecord{};
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      block_start = 0;
      continue;
    }
    if (block_start == 0) block_start = lineno;
    if (line.front() == '#') {
      auto body = trim(std::string_view(line).substr(1));
      if (body.rfind("sent_id", 0) == 0 && body.find('=') != std::string_view::npos)
        current.sentence_id = std::string(trim(body.substr(body.find('=') + 1)));
      else if (body.rfind("text", 0) == 0 && body.find('=') != std::string_view::npos && body.size() > 4 &&
               (body[4] == ' ' || body[4] == '='))
        current.raw_text = std::string(trim(body.substr(body.find('=') + 1)));
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 10)
      throw ParseError(file, lineno, "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    const std::string& id = cols[0];
    if (id.find('-') != std::string::npos || id.find('.') != std::string::npos) continue;  // MWT / empty node
    if (id.empty() || !std::all_of(id.begin(), id.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError(file, lineno, "invalid token ID '" + id + "'");
    if (std::stoul(id) != current.tokens.size() + 1)
      throw ParseError(file, lineno, "token ID " + id + " out of sequence");
    Token tok;
    tok.surface = cols[1];
    tok.lemma = cols[2];
    tok.pos = cols[3];
    tok.morph = parse_feats(cols[5], file, lineno);
    if (cols[6] != "_") {
      try {
        tok.head = std::stoi(cols[6]);
      } catch (const std::exception&) {
        throw ParseError(file, lineno, "invalid HEAD '" + cols[6] + "'");
      }
    }
    tok.deprel = cols[7] == "_" ? std::string() : cols[7];
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return corpus;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, Layer layer, Period period) {
  if (layer == Layer::conllu) return load_conllu(path, period);
  return load_lines(path, layer, period);
}

Corpus load_corpus(const std::map<Layer, std::filesystem::path>& sources, Period period) {
  if (sources.empty()) throw PreconditionError("no corpus layers given");
  Corpus corpus(period);
  // CoNLL-U first so its sentence ids win.
  if (auto it = sources.find(Layer::conllu); it != sources.end()) corpus.merge(load_corpus(it->second, it->first, period));
  for (const auto& [layer, path] : sources)
    if (layer != Layer::conllu) corpus.merge(load_corpus(path, layer, period));
  return corpus;
}

void write_layer(const Corpus& corpus, Layer layer, const std::filesystem::path& path, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  if (layer == Layer::conllu) {
    out << provenance_line(seed) << '\n';
    for (const auto& s : corpus.sentences()) {
      out << "# sent_id = " << s.sentence_id << '\n';
      if (!s.raw_text.empty()) out << "# text = " << s.raw_text << '\n';
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const auto& t = s.tokens[i];
        std::string feats;
        for (const auto& [k, v] : t.morph) feats += (feats.empty() ? "" : "|") + k + "=" + v;
        out << i + 1 << '\t' << (t.surface.empty() ? "_" : t.surface) << '\t' << (t.lemma.empty() ? "_" : t.lemma)
            << '\t' << (t.pos.empty() ? "_" : t.pos) << "\t_\t" << (feats.empty() ? "_" : feats) << '\t'
            << (t.head >= 0 ? std::to_string(t.head) : "_") << '\t' << (t.deprel.empty() ? "_" : t.deprel)
            << "\t_\t_\n";
      }
      out << '\n';
    }
    return;
  }
  out << provenance_line(seed) << '\n';
  for (const auto& s : corpus.sentences()) {
    if (layer == Layer::raw) {
      out << s.raw_text << '\n';
      continue;
    }
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const auto& t = s.tokens[i];
      if (i) out << ' ';
      out << (layer == Layer::token ? t.surface : layer == Layer::lemma ? t.lemma : t.pos);
    }
    out << '\n';
  }
}

const PosSet& content_pos() {
  static const PosSet set{"NOUN", "VERB", "ADJ", "ADV"};
  return set;
}

namespace {

bool is_punctuation_token(const Token& t) {
  if (t.pos == "PUNCT") return true;
  const auto cps = to_u32(t.lemma.empty() ? t.surface : t.lemma);
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), is_punctuation);
}

}  // namespace

VocabStats frequency_counts(const Corpus& corpus, const std::optional<PosSet>& pos_filter) {
  if (!corpus.sentences().empty() && !corpus.has(Layer::lemma))
    throw PreconditionError("frequency_counts requires the lemma layer");
  if (pos_filter && !corpus.sentences().empty() && !corpus.has(Layer::pos))
    throw PreconditionError("POS filtering requires the pos layer");
  VocabStats stats;
  stats.period = corpus.period();
  std::map<std::string, std::int64_t> raw;
  for (const auto& s : corpus.sentences()) {
    for (const auto& t : s.tokens) {
      if (is_punctuation_token(t)) continue;
      ++stats.total_tokens;
      if (pos_filter && !pos_filter->count(t.pos)) continue;
      ++raw[t.lemma];
    }
  }
  for (const auto& [lemma, n] : raw) stats.lemma_freq[normalize_lemma(lemma)] += n;
  return stats;
}

void write_vocab_stats(const VocabStats& stats, const std::filesystem::path& path, std::uint64_t seed) {
  TsvWriter w(path, seed, {"lemma", "count"},
              {{"period", to_string(stats.period)}, {"total_tokens", std::to_string(stats.total_tokens)}});
  for (const auto& [lemma, n] : stats.lemma_freq) w.row({lemma, std::to_string(n)});
}

VocabStats read_vocab_stats(const std::filesystem::path& path) {
  auto table = TsvTable::read(path);
  VocabStats stats;
  auto it = table.meta().find("total_tokens");
  if (it == table.meta().end()) throw FormatError(path.string() + ": missing total_tokens in header comment");
  stats.total_tokens = std::stoll(it->second);
  if (auto p = table.meta().find("period"); p != table.meta().end()) stats.period = parse_period(p->second);
  const auto lemma_col = table.column("lemma");
  const auto count_col = table.column("count");
  for (std::size_t r = 0; r < table.size(); ++r) {
    double v = parse_double(table.at(r, count_col), table.source(), table.line_of(r));
    if (v < 1 || v != std::floor(v)) throw ParseError(table.source(), table.line_of(r), "count must be a positive integer");
    stats.lemma_freq[normalize_lemma(table.at(r, lemma_col))] += static_cast<std::int64_t>(v);
  }
  return stats;
}

std::vector<std::string> select_targets(const VocabStats& stats1, const VocabStats& stats2, std::int64_t min1,
                                        std::int64_t min2) {
  std::vector<std::string> out;
  for (const auto& [lemma, f1] : stats1.lemma_freq) {
    if (f1 < min1) continue;
    auto it = stats2.lemma_freq.find(lemma);
    if (it == stats2.lemma_freq.end() || it->second < min2) continue;
    out.push_back(lemma);
  }
  return out;  // std::map iteration order is already lexicographic
}

std::int64_t proportional_threshold(std::int64_t min1, std::int64_t total1, std::int64_t total2) {
  if (total1 <= 0) throw PreconditionError("first corpus is empty");
  return std::llround(static_cast<double>(min1) * static_cast<double>(total2) / static_cast<double>(total1));
}

namespace {

struct Occurrence {
  std::size_t sentence;
  std::size_t token;
};

// Context string for a sentence and the code-point span of each token within
// it. Tokens are located in the raw text when possible, otherwise the context
// is the space-joined surface (or lemma) sequence.
std::pair<std::string, std::vector<Span>> render_context(const SentenceRecord& s) {
  std::vector<std::string> forms;
  forms.reserve(s.tokens.size());
  for (const auto& t : s.tokens) forms.push_back(t.surface.empty() ? t.lemma : t.surface);

  if (!s.raw_text.empty()) {
    std::u32string raw = to_u32(s.raw_text);
    std::vector<Span> spans;
    std::size_t cursor = 0;
    bool ok = true;
    for (const auto& f : forms) {
      std::u32string needle = to_u32(f);
      auto pos = raw.find(needle, cursor);
      if (needle.empty() || pos == std::u32string::npos) {
        ok = false;
        break;
      }
      spans.push_back({pos, pos + needle.size()});
      cursor = pos + needle.size();
    }
    if (ok) return {s.raw_text, spans};
  }
  std::vector<Span> spans;
  std::size_t offset = 0;
  for (const auto& f : forms) {
    std::size_t len = codepoint_length(f);
    spans.push_back({offset, offset + len});
    offset += len + 1;
  }
  return {join(forms, " "), spans};
}

}  // namespace

SampleResult sample_usages(const Corpus& corpus, const std::string& lemma, std::size_t count, std::uint64_t seed) {
  if (!corpus.has(Layer::lemma)) throw PreconditionError("sample_usages requires the lemma layer");
  if (count < 1) throw PreconditionError("sample size must be at least 1");
  const std::string key = normalize_lemma(lemma);
  std::vector<Occurrence> occ;
  const auto& sents = corpus.sentences();
  std::unordered_map<std::string, bool> matches;
  for (std::size_t i = 0; i < sents.size(); ++i)
    for (std::size_t t = 0; t < sents[i].tokens.size(); ++t) {
      const auto& lemma_form = sents[i].tokens[t].lemma;
      auto it = matches.find(lemma_form);
      if (it == matches.end()) it = matches.emplace(lemma_form, normalize_lemma(lemma_form) == key).first;
      if (it->second) occ.push_back({i, t});
    }
  if (occ.empty()) throw NotFoundError("lemma '" + lemma + "' does not occur in corpus " + to_string(corpus.period()));

  SampleResult result;
  result.available = occ.size();
  std::vector<Occurrence> chosen;
  if (occ.size() <= count) {
    chosen = occ;
    result.undersampled = occ.size() < count;
  } else {
    std::mt19937_64 rng(seed);
    std::sample(occ.begin(), occ.end(), std::back_inserter(chosen), count, rng);
  }
  for (const auto& o : chosen) {
    const auto& s = sents[o.sentence];
    auto [context, spans] = render_context(s);
    Usage u;
    u.lemma = key;
    u.pos = s.tokens[o.token].pos;
    u.period = corpus.period();
    u.sentence_id = s.sentence_id;
    u.identifier = key + "-" + to_string(corpus.period()) + "-" + s.sentence_id + "-" + std::to_string(o.token + 1);
    u.context = std::move(context);
    u.target = spans[o.token];
    result.usages.push_back(std::move(u));
  }
  return result;
}

SurfaceLexicon build_surface_lexicon(const Corpus& corpus) {
  SurfaceLexicon lex;
  for (const auto& s : corpus.sentences())
    for (const auto& t : s.tokens) {
      const std::string& form = t.surface.empty() ? t.lemma : t.surface;
      if (form.empty() || t.lemma.empty()) continue;
      lex[normalize_lemma(form)].insert(normalize_lemma(t.lemma));
    }
  return lex;
}

namespace {

bool lemma_matches(const std::u32string& surface, const std::string& lemma, const SurfaceLexicon* lexicon) {
  const std::string norm_surface = normalize_lemma(to_utf8(surface));
  const std::string norm_lemma = normalize_lemma(lemma);
  if (norm_surface == norm_lemma) return true;
  if (lexicon) {
    auto it = lexicon->find(norm_surface);
    return it != lexicon->end() && it->second.count(norm_lemma) > 0;
  }
  // Inflected forms share a stem with the lemma: require a common prefix of
  // at least min(len) - 2 code points, and at least 2.
  std::u32string a = to_u32(norm_surface);
  std::u32string b = to_u32(norm_lemma);
  std::size_t common = 0;
  while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
  std::size_t shorter = std::min(a.size(), b.size());
  std::size_t need = std::max<std::size_t>(2, shorter > 2 ? shorter - 2 : shorter);
  return common >= std::min(need, shorter) && common >= 2;
}

}  // namespace

ValidationResult validate_target_index(const Usage& usage, const SurfaceLexicon* lexicon) {
  ValidationResult r;
  r.span = usage.target;
  std::u32string ctx = to_u32(usage.context);
  const auto [start, end] = usage.target;
  if (!(start < end && end <= ctx.size())) {
    r.reason = "span " + format_span(usage.target) + " out of bounds for context of length " +
               std::to_string(ctx.size());
    return r;
  }
  r.text = to_utf8(ctx.substr(start, end - start));
  std::size_t stripped_end = end;
  while (stripped_end > start && is_punctuation(ctx[stripped_end - 1])) --stripped_end;
  if (stripped_end == start) {
    r.reason = "span covers only punctuation";
    return r;
  }
  if (start > 0 && is_word_char(ctx[start - 1])) {
    r.reason = "span starts inside a word";
    return r;
  }
  if (stripped_end < ctx.size() && is_word_char(ctx[stripped_end])) {
    r.reason = "span ends inside a word";
    return r;
  }
  std::u32string surface = ctx.substr(start, stripped_end - start);
  if (!lemma_matches(surface, usage.lemma, lexicon)) {
    r.reason = "'" + to_utf8(surface) + "' is not a form of '" + usage.lemma + "'";
    return r;
  }
  if (stripped_end == end) {
    r.status = ValidationResult::Status::ok;
  } else {
    r.status = ValidationResult::Status::corrected_span;
    r.span = {start, stripped_end};
    r.text = to_utf8(surface);
  }
  return r;
}

std::string format_span(const Span& s) { return std::to_string(s.start) + ":" + std::to_string(s.end); }

Span parse_span(std::string_view s) {
  auto parts = split(trim(s), ':');
  if (parts.size() != 2) throw FormatError("malformed span '" + std::string(s) + "' (expected start:end)");
  try {
    std::size_t a = std::stoul(parts[0]);
    std::size_t b = std::stoul(parts[1]);
    return {a, b};
  } catch (const std::exception&) {
    throw FormatError("malformed span '" + std::string(s) + "' (expected start:end)");
  }
}

void write_usages(const std::vector<Usage>& usages, const std::filesystem::path& path, std::uint64_t seed) {
  TsvWriter w(path, seed, kUsageColumns);
  for (const auto& u : usages)
    w.row({u.lemma, u.pos, u.period == Period::C1 ? "1" : "2", u.identifier, u.context, format_span(u.target)});
}

std::vector<Usage> read_usages(const std::filesystem::path& path) {
  auto table = TsvTable::read(path);
  const auto c_lemma = table.column("lemma");
  const auto c_group = table.column("grouping");
  const auto c_id = table.column("identifier");
  const auto c_ctx = table.column("context");
  const auto c_span = table.column("indexes_target_token");
  const bool has_pos = table.has_column("pos");
  std::vector<Usage> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    Usage u;
    try {
      u.lemma = normalize_lemma(table.at(r, c_lemma));
      u.pos = has_pos ? table.at(r, "pos") : std::string();
      u.period = parse_period(table.at(r, c_group));
      u.identifier = table.at(r, c_id);
      u.sentence_id = u.identifier;
      u.context = table.at(r, c_ctx);
      u.target = parse_span(table.at(r, c_span));
    } catch (const FormatError& e) {
      throw ParseError(table.source(), table.line_of(r), e.what());
    }
    if (u.identifier.empty()) throw ParseError(table.source(), table.line_of(r), "empty identifier");
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace lsc
