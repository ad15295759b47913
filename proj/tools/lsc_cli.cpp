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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lsc/agreement.hpp"
#include "lsc/baselines.hpp"
#include "lsc/change_scores.hpp"
#include "lsc/corpus.hpp"
#include "lsc/error.hpp"
#include "lsc/eval.hpp"
#include "lsc/procrustes.hpp"
#include "lsc/sgns.hpp"
#include "lsc/synth.hpp"
#include "lsc/text.hpp"
#include "lsc/tsv.hpp"
#include "lsc/wug.hpp"

namespace fs = std::filesystem;

namespace {

using namespace lsc;

// "layer=path" arguments, e.g. conllu=c1.conllu lemma=c1.lemma.txt.
std::map<Layer, fs::path> parse_layer_specs(const std::vector<std::string>& specs) {
  std::map<Layer, fs::path> out;
  for (const auto& s : specs) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw PreconditionError("corpus source must be layer=path, got '" + s + "'");
    const Layer l = parse_layer(s.substr(0, eq));
    fs::path p = s.substr(eq + 1);
    if (!fs::exists(p)) throw NotFoundError("corpus file not found: " + p.string());
    if (!out.emplace(l, p).second) throw PreconditionError("layer given twice: " + to_string(l));
  }
  if (out.empty()) throw PreconditionError("no corpus sources given");
  return out;
}

Corpus load_sources(const std::vector<std::string>& specs, Period period) {
  return load_corpus(parse_layer_specs(specs), period);
}

void write_targets(const std::vector<std::string>& targets, const VocabStats& s1, const VocabStats& s2,
                   const fs::path& path, std::uint64_t seed) {
  TsvWriter w(path, seed, {"lemma", "freq1", "freq2"});
  for (const auto& t : targets)
    w.row({t, std::to_string(s1.lemma_freq.at(t)), std::to_string(s2.lemma_freq.at(t))});
}

std::vector<std::string> read_targets(const fs::path& path) {
  const auto table = TsvTable::read(path);
  const auto col = table.column("lemma");
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.size(); ++r) {
    auto l = normalize_lemma(table.at(r, col));
    if (l.empty()) throw ParseError(path.string(), table.line_of(r), "empty lemma");
    if (seen.insert(l).second) out.push_back(std::move(l));
  }
  return out;
}

void ensure_dir(const fs::path& dir) { fs::create_directories(dir); }

ClusterParams::Method parse_method(const std::string& s) {
  if (s == "auto") return ClusterParams::Method::automatic;
  if (s == "exact") return ClusterParams::Method::exact;
  if (s == "anneal") return ClusterParams::Method::anneal;
  throw PreconditionError("unknown clustering method '" + s + "'");
}

AlphaMetric parse_metric(const std::string& s) {
  if (s == "ordinal") return AlphaMetric::ordinal;
  if (s == "interval") return AlphaMetric::interval;
  throw PreconditionError("unknown alpha metric '" + s + "'");
}

PredictionSet binarize(const PredictionSet& graded, const std::string& method) {
  if (method == "mean-std") return binarize_mean_std(graded);
  if (method == "changepoint") return binarize_changepoint(graded);
  throw PreconditionError("unknown binarization '" + method + "'");
}

void print_skipped(const PredictionSet& p) {
  if (p.skipped.empty()) return;
  std::cerr << "note: " << p.skipped.size() << " word(s) without a " << to_string(p.task) << " score:";
  for (const auto& w : p.skipped) std::cerr << ' ' << w;
  std::cerr << '\n';
}

// ---- subcommands ----------------------------------------------------------

struct IngestOpts {
  std::vector<std::string> sources;
  std::string period = "1";
  fs::path out;
  bool all_pos = false;
  std::uint64_t seed = 0;
};

void run_ingest(const IngestOpts& o) {
  const Corpus c = load_sources(o.sources, parse_period(o.period));
  const auto stats = frequency_counts(c, o.all_pos ? std::nullopt : std::optional<PosSet>(content_pos()));
  write_vocab_stats(stats, o.out, o.seed);
  std::cout << to_string(c.period()) << ": " << c.sentences().size() << " sentences, " << stats.total_tokens
            << " tokens, " << stats.lemma_freq.size() << " lemmas\n";
}

struct TargetsOpts {
  fs::path stats1, stats2, out;
  std::int64_t min1 = 0;
  std::optional<std::int64_t> min2;
  std::uint64_t seed = 0;
};

void run_targets(const TargetsOpts& o) {
  const auto s1 = read_vocab_stats(o.stats1);
  const auto s2 = read_vocab_stats(o.stats2);
  const std::int64_t min2 = o.min2 ? *o.min2 : proportional_threshold(o.min1, s1.total_tokens, s2.total_tokens);
  const auto targets = select_targets(s1, s2, o.min1, min2);
  write_targets(targets, s1, s2, o.out, o.seed);
  std::cout << targets.size() << " targets (min1=" << o.min1 << ", min2=" << min2 << ")\n";
}

struct SampleOpts {
  std::vector<std::string> c1, c2;
  fs::path targets, out;
  std::size_t count = 20;
  bool validate = false;
  std::uint64_t seed = 0;
};

void run_sample(const SampleOpts& o) {
  const auto targets = read_targets(o.targets);
  const Corpus c1 = load_sources(o.c1, Period::C1);
  const Corpus c2 = load_sources(o.c2, Period::C2);
  std::vector<Usage> all;
  std::size_t undersampled = 0, corrected = 0, mismatched = 0;
  SurfaceLexicon lex1, lex2;
  if (o.validate) {
    lex1 = build_surface_lexicon(c1);
    lex2 = build_surface_lexicon(c2);
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (const Corpus* c : {&c1, &c2}) {
      const std::uint64_t seed = o.seed + 2 * i + (c == &c2 ? 1 : 0);
      SampleResult r;
      try {
        r = sample_usages(*c, targets[i], o.count, seed);
      } catch (const NotFoundError&) {
        std::cerr << "warning: no occurrences of '" << targets[i] << "' in " << to_string(c->period()) << '\n';
        continue;
      }
      if (r.undersampled) {
        ++undersampled;
        std::cerr << "warning: '" << targets[i] << "' has only " << r.available << " occurrence(s) in "
                  << to_string(c->period()) << '\n';
      }
      for (auto& u : r.usages) {
        if (o.validate) {
          const auto v = validate_target_index(u, c == &c1 ? &lex1 : &lex2);
          if (v.status == ValidationResult::Status::corrected_span) {
            u.target = v.span;
            ++corrected;
          } else if (v.status == ValidationResult::Status::mismatch) {
            ++mismatched;
            std::cerr << "warning: " << u.identifier << ": " << v.reason << '\n';
          }
        }
        all.push_back(std::move(u));
      }
    }
  }
  write_usages(all, o.out, o.seed);
  std::cout << all.size() << " usages for " << targets.size() << " targets";
  if (undersampled) std::cout << ", " << undersampled << " undersampled";
  if (o.validate) std::cout << ", " << corrected << " spans corrected, " << mismatched << " mismatches";
  std::cout << '\n';
}

struct WugBuildOpts {
  fs::path uses, judgments, out;
  std::uint64_t seed = 0;
};

void run_wug_build(const WugBuildOpts& o) {
  const auto usages = read_usages(o.uses);
  auto judgments = read_judgments(o.judgments);
  std::map<std::string, std::vector<Usage>> by_lemma;
  std::map<std::string, std::string> lemma_of;
  for (const auto& u : usages) {
    lemma_of[u.identifier] = u.lemma;
    by_lemma[u.lemma].push_back(u);
  }
  std::map<std::string, std::vector<Judgment>> judged;
  for (auto& j : judgments) {
    auto a = lemma_of.find(j.usage1);
    auto b = lemma_of.find(j.usage2);
    if (a == lemma_of.end() || b == lemma_of.end())
      throw IntegrityError("judgment references unknown usage: " + (a == lemma_of.end() ? j.usage1 : j.usage2));
    if (a->second != b->second)
      throw IntegrityError("judgment pairs usages of different lemmas: " + j.usage1 + ", " + j.usage2);
    if (!j.lemma.empty() && normalize_lemma(j.lemma) != a->second)
      throw IntegrityError("judgment lemma '" + j.lemma + "' does not match its usages");
    j.lemma = a->second;
    judged[j.lemma].push_back(j);
  }
  ensure_dir(o.out);
  std::size_t built = 0;
  for (auto& [lemma, us] : by_lemma) {
    const auto& js = judged[lemma];
    const auto g = build_wug(lemma, std::move(us), aggregate_judgments(js));
    write_wug(g, o.out, o.seed);
    ++built;
  }
  std::cout << built << " graphs written to " << o.out.string() << '\n';
}

struct WugClusterOpts {
  fs::path graphs, out;
  double threshold = 2.5;
  int restarts = 20;
  int max_iters = 0;
  std::string method = "auto";
  std::size_t exact_limit = 10;
  std::uint64_t seed = 0;
};

void run_wug_cluster(const WugClusterOpts& o) {
  ClusterParams params;
  params.threshold = o.threshold;
  params.restarts = o.restarts;
  params.max_iters = o.max_iters;
  params.method = parse_method(o.method);
  params.exact_limit = o.exact_limit;
  params.seed = o.seed;
  ensure_dir(o.out);
  TsvWriter stats(o.out / "stats.tsv", o.seed,
                  {"lemma", "nodes", "edges", "clusters", "loss", "normalized_loss", "connected", "uncompared"});
  std::size_t n = 0;
  for (const auto& dir : list_wug_dirs(o.graphs)) {
    const auto g = read_wug(dir);
    const auto c = cluster_wug(g, params);
    write_clustering(g, c, o.out / (safe_file_name(g.lemma()) + ".tsv"), o.seed);
    const auto conn = check_cluster_connectivity(g, c);
    stats.row({g.lemma(), std::to_string(g.node_count()), std::to_string(g.edge_count()),
               std::to_string(c.cluster_count), format_double(c.loss), format_double(c.normalized_loss),
               conn.connected ? "1" : "0", std::to_string(uncompared_multi_clusters(g, c))});
    if (!conn.connected)
      std::cerr << "warning: '" << g.lemma() << "' has " << conn.missing_pairs.size()
                << " cluster pair(s) without a judged edge\n";
    ++n;
  }
  std::cout << n << " graphs clustered\n";
}

struct GoldOpts {
  fs::path graphs, clusters, out;
  std::string rounding = "exact";
  double threshold = 2.5;
  std::uint64_t seed = 0;
};

void run_gold_scores(const GoldOpts& o) {
  ChangeOptions opts;
  if (o.rounding == "exact")
    opts.rounding = KnRounding::exact;
  else if (o.rounding == "nearest")
    opts.rounding = KnRounding::nearest;
  else
    throw PreconditionError("unknown rounding '" + o.rounding + "'");
  std::map<std::string, ChangeScores> scores;
  for (const auto& dir : list_wug_dirs(o.graphs)) {
    const auto g = read_wug(dir);
    const auto path = o.clusters / (safe_file_name(g.lemma()) + ".tsv");
    if (!fs::exists(path)) throw NotFoundError("no clustering for '" + g.lemma() + "': " + path.string());
    const auto c = read_clustering(g, path, o.threshold);
    scores[g.lemma()] = derive_change_scores(g, c, opts);
  }
  write_gold_scores(scores, o.out, o.seed);
  std::cout << scores.size() << " gold entries\n";
}

struct AgreementOpts {
  fs::path judgments, out;
  std::optional<fs::path> uses, gold, cluster_stats, kept;
  std::string metric = "ordinal";
  double threshold = 0.3;
  std::uint64_t seed = 0;
};

void run_agreement(const AgreementOpts& o) {
  const AlphaMetric metric = parse_metric(o.metric);
  auto judgments = read_judgments(o.judgments);
  std::map<std::string, WordOverview> info;
  if (o.uses) {
    std::map<std::string, std::string> lemma_of;
    for (const auto& u : read_usages(*o.uses)) {
      lemma_of[u.identifier] = u.lemma;
      auto& w = info[u.lemma];
      if (w.pos.empty()) w.pos = u.pos;
      ++w.usages;
    }
    for (auto& j : judgments) {
      if (!j.lemma.empty()) continue;
      auto it = lemma_of.find(j.usage1);
      if (it != lemma_of.end()) j.lemma = it->second;
    }
  }
  for (const auto& j : judgments)
    if (j.lemma.empty()) throw IntegrityError("judgment without lemma; pass --uses to resolve " + j.usage1);
  if (o.gold) {
    for (const auto& [w, s] : read_gold_scores(*o.gold)) {
      info[w].binary = s.binary;
      info[w].graded = s.graded;
    }
  }
  if (o.cluster_stats) {
    const auto t = TsvTable::read(*o.cluster_stats);
    for (std::size_t r = 0; r < t.size(); ++r) {
      auto& w = info[normalize_lemma(t.at(r, "lemma"))];
      w.uncompared = std::stoul(t.at(r, "uncompared"));
      w.normalized_loss = parse_double(t.at(r, "normalized_loss"), t.source(), t.line_of(r));
    }
  }
  const auto report = agreement_report(judgments, metric);
  const auto filtered = filter_words_by_agreement(report, o.threshold);
  std::vector<std::string> words;
  for (const auto& [w, a] : report.per_word) words.push_back(w);
  std::vector<OverviewRow> rows;
  for (const auto& w : words) rows.push_back(overview_row(w, {w}, judgments, info, metric));
  rows.push_back(overview_row("full", words, judgments, info, metric));
  rows.push_back(overview_row("kept", filtered.kept, judgments, info, metric));
  write_agreement_report(report, rows, o.out, o.seed);
  if (o.kept) {
    TsvWriter w(*o.kept, o.seed, {"lemma"}, {{"alpha_threshold", format_double(o.threshold)}});
    for (const auto& k : filtered.kept) w.row({k});
  }
  std::cout << words.size() << " words, " << filtered.discarded.size() << " below alpha " << o.threshold;
  if (report.global.alpha_local) std::cout << ", global alpha " << *report.global.alpha_local;
  std::cout << '\n';
}

struct BaselineCommon {
  fs::path targets, out;
  std::string binarize = "mean-std";
  std::uint64_t seed = 0;
};

void write_graded_and_binary(const PredictionSet& graded, const BaselineCommon& o) {
  ensure_dir(o.out);
  write_predictions(graded, o.out / kSubmissionFiles.at(Task::graded), o.seed);
  print_skipped(graded);
  write_predictions(binarize(graded, o.binarize), o.out / kSubmissionFiles.at(Task::binary), o.seed);
}

struct SgnsOpts {
  BaselineCommon common;
  std::vector<std::string> c1, c2;
  SgnsParams params;
  std::optional<fs::path> save_embeddings;
};

void run_baseline_sgns(const SgnsOpts& o) {
  const auto targets = read_targets(o.common.targets);
  const Corpus c1 = load_sources(o.c1, Period::C1);
  const Corpus c2 = load_sources(o.c2, Period::C2);
  const auto e1 = train_sgns(c1, o.params, o.common.seed);
  const auto e2 = train_sgns(c2, o.params, o.common.seed + 1);
  const auto aligned = orthogonal_procrustes(e1, e2);
  if (o.save_embeddings) {
    ensure_dir(*o.save_embeddings);
    save_embeddings(aligned.aligned, *o.save_embeddings / "c1.aligned.emb");
    save_embeddings(e2, *o.save_embeddings / "c2.emb");
  }
  write_graded_and_binary(cosine_change_scores(aligned.aligned, e2, targets), o.common);
}

struct FreqOpts {
  BaselineCommon common;
  fs::path stats1, stats2;
  std::string norm = "log";
};

void run_baseline_freq(const FreqOpts& o) {
  const auto targets = read_targets(o.common.targets);
  FreqNormalization norm;
  if (o.norm == "log")
    norm = FreqNormalization::log_ratio;
  else if (o.norm == "per-log-total")
    norm = FreqNormalization::per_log_total;
  else
    throw PreconditionError("unknown frequency normalization '" + o.norm + "'");
  const auto change = freq_diff_scores(read_vocab_stats(o.stats1), read_vocab_stats(o.stats2), targets, norm);
  write_graded_and_binary(change.graded, o.common);
  const auto binary = binarize(change.graded, o.common.binarize);
  const auto [gain, loss] = frequency_gain_loss(binary, change.signed_change);
  write_predictions(gain, o.common.out / kSubmissionFiles.at(Task::gain), o.common.seed);
  write_predictions(loss, o.common.out / kSubmissionFiles.at(Task::loss), o.common.seed);
}

struct ProfileOpts {
  BaselineCommon common;
  std::vector<std::string> c1, c2;
  std::string features = "all";
};

void run_baseline_profile(const ProfileOpts& o) {
  const auto targets = read_targets(o.common.targets);
  ProfileFeatures f;
  if (o.features == "all")
    f = ProfileFeatures::morph_and_syntax;
  else if (o.features == "morph")
    f = ProfileFeatures::morph;
  else if (o.features == "syntax")
    f = ProfileFeatures::syntax;
  else
    throw PreconditionError("unknown profile features '" + o.features + "'");
  const Corpus c1 = load_sources(o.c1, Period::C1);
  const Corpus c2 = load_sources(o.c2, Period::C2);
  write_graded_and_binary(profile_change_scores(c1, c2, targets, f), o.common);
}

void run_baseline_minority(const BaselineCommon& o) {
  const auto targets = read_targets(o.targets);
  ensure_dir(o.out);
  for (Task t : {Task::binary, Task::gain, Task::loss})
    write_predictions(minority_baseline(targets, t), o.out / kSubmissionFiles.at(t), o.seed);
}

void run_baseline_random(const BaselineCommon& o) {
  const auto targets = read_targets(o.targets);
  ensure_dir(o.out);
  std::uint64_t s = o.seed;
  for (const auto& [t, file] : kSubmissionFiles) write_predictions(random_baseline(targets, t, s++), o.out / file, o.seed);
}

struct EvaluateOpts {
  fs::path gold, submission;
  std::optional<fs::path> out;
  int phase = 1;
  bool lenient = false;
  std::uint64_t seed = 0;
};

void run_evaluate(const EvaluateOpts& o) {
  if (o.phase != 1 && o.phase != 2) throw PreconditionError("phase must be 1 or 2");
  const auto gold = read_gold_set(o.gold);
  const auto report = score_submission(gold, o.submission, static_cast<Phase>(o.phase),
                                       o.lenient ? Coverage::lenient : Coverage::strict);
  std::cout << format_eval_table(report);
  for (const auto& r : report.results)
    if (!r.note.empty()) std::cerr << "note: " << to_string(r.task) << ": " << r.note << '\n';
  if (o.out) write_eval_report(report, *o.out, o.seed);
}

struct SweepOpts {
  fs::path gold, predictions, out;
  std::string task = "binary";
  bool lenient = false;
  std::uint64_t seed = 0;
};

void run_sweep(const SweepOpts& o) {
  const Task task = parse_task(o.task);
  if (!is_binary(task)) throw PreconditionError("sweep labels a binary subtask; got '" + o.task + "'");
  const auto gold = read_gold_set(o.gold);
  const auto pred = read_predictions(o.predictions, Task::graded);
  const auto pct = default_percentiles();
  const auto curve = threshold_sweep(gold.labels(task), pred.values, pct,
                                     o.lenient ? Coverage::lenient : Coverage::strict);
  TsvWriter w(o.out, o.seed, {"percentile", "f1"}, {{"task", o.task}});
  double best = 0.0, best_p = 0.0;
  for (const auto& pt : curve) {
    w.row({format_double(pt.percentile), format_double(pt.f1)});
    if (pt.f1 > best) {
      best = pt.f1;
      best_p = pt.percentile;
    }
  }
  std::cout << "max F1 " << best << " at percentile " << best_p << '\n';
}

struct SynthOpts {
  SynthConfig cfg;
  fs::path out;
};

void run_synth(const SynthOpts& o) {
  const auto data = generate_synthetic(o.cfg);
  write_synthetic(data, o.cfg, o.out);
  std::cout << "wrote synthetic corpora (" << data.planted.size() << " planted changes, " << data.usages.size()
            << " usages, " << data.judgments.size() << " judgments) to " << o.out.string() << '\n';
}

void add_seed(CLI::App* app, std::uint64_t& seed) {
  app->add_option("--seed", seed, "Random seed, recorded in every output header")->capture_default_str();
}

void add_corpus(CLI::App* app, const std::string& name, std::vector<std::string>& specs, const std::string& what) {
  app->add_option(name, specs, what + " as layer=path (layers: raw, token, lemma, pos, conllu); repeatable")
      ->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexical semantic change detection toolkit"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  IngestOpts ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Load and cross-check corpus layers, write lemma frequency counts");
  add_corpus(c_ingest, "--corpus", ingest.sources, "Corpus source");
  c_ingest->add_option("--period", ingest.period, "Time period (1 or 2)")->capture_default_str();
  c_ingest->add_option("--out", ingest.out, "Output vocabulary statistics TSV")->required();
  c_ingest->add_flag("--all-pos", ingest.all_pos, "Count all parts of speech instead of NOUN/VERB/ADJ/ADV only");
  add_seed(c_ingest, ingest.seed);

  TargetsOpts targets;
  auto* c_targets = app.add_subcommand("targets", "Select lemmas frequent enough in both periods");
  c_targets->add_option("--stats1", targets.stats1, "Vocabulary statistics for C1")->required()->check(CLI::ExistingFile);
  c_targets->add_option("--stats2", targets.stats2, "Vocabulary statistics for C2")->required()->check(CLI::ExistingFile);
  c_targets->add_option("--min1", targets.min1, "Minimum frequency in C1")->required()->check(CLI::NonNegativeNumber);
  c_targets->add_option("--min2", targets.min2,
                        "Minimum frequency in C2 (default: min1 scaled by the corpus size ratio)")
      ->check(CLI::NonNegativeNumber);
  c_targets->add_option("--out", targets.out, "Output target list TSV")->required();
  add_seed(c_targets, targets.seed);

  SampleOpts sample;
  auto* c_sample = app.add_subcommand("sample", "Sample usages of every target from both periods");
  add_corpus(c_sample, "--c1", sample.c1, "C1 corpus source");
  add_corpus(c_sample, "--c2", sample.c2, "C2 corpus source");
  c_sample->add_option("--targets", sample.targets, "Target list TSV")->required()->check(CLI::ExistingFile);
  c_sample->add_option("--count", sample.count, "Usages per target and period")->capture_default_str();
  c_sample->add_flag("--validate", sample.validate, "Check and repair target spans against the corpus lexicon");
  c_sample->add_option("--out", sample.out, "Output usage TSV")->required();
  add_seed(c_sample, sample.seed);

  WugBuildOpts wb;
  auto* c_wb = app.add_subcommand("wug-build", "Aggregate judgments into one word usage graph per lemma");
  c_wb->add_option("--uses", wb.uses, "Usage TSV")->required()->check(CLI::ExistingFile);
  c_wb->add_option("--judgments", wb.judgments, "Judgment TSV")->required()->check(CLI::ExistingFile);
  c_wb->add_option("--out", wb.out, "Output graph directory")->required();
  add_seed(c_wb, wb.seed);

  WugClusterOpts wc;
  auto* c_wc = app.add_subcommand("wug-cluster", "Correlation-cluster every graph");
  c_wc->add_option("--graphs", wc.graphs, "Graph directory from wug-build")->required()->check(CLI::ExistingDirectory);
  c_wc->add_option("--out", wc.out, "Output directory (one <lemma>.tsv per graph plus stats.tsv)")->required();
  c_wc->add_option("--threshold", wc.threshold, "Weight shift; edges above count as positive")->capture_default_str();
  c_wc->add_option("--restarts", wc.restarts, "Annealing restarts")->capture_default_str()->check(CLI::PositiveNumber);
  c_wc->add_option("--max-iters", wc.max_iters, "Annealing steps per restart (0: 400 per node)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  c_wc->add_option("--method", wc.method, "auto, exact or anneal")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "exact", "anneal"}));
  c_wc->add_option("--exact-limit", wc.exact_limit, "auto: exact search for components up to this many nodes")
      ->capture_default_str();
  add_seed(c_wc, wc.seed);

  GoldOpts gold;
  auto* c_gold = app.add_subcommand("gold-scores", "Derive graded, binary, gain, loss and COMPARE scores");
  c_gold->add_option("--graphs", gold.graphs, "Graph directory from wug-build")->required()->check(CLI::ExistingDirectory);
  c_gold->add_option("--clusters", gold.clusters, "Clustering directory from wug-cluster")
      ->required()
      ->check(CLI::ExistingDirectory);
  c_gold->add_option("--out", gold.out, "Output gold TSV")->required();
  c_gold->add_option("--rounding", gold.rounding, "k/n thresholds: exact (fractional) or nearest")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "nearest"}));
  c_gold->add_option("--threshold", gold.threshold, "Weight shift used to recompute clustering loss")
      ->capture_default_str();
  add_seed(c_gold, gold.seed);

  AgreementOpts ag;
  auto* c_ag = app.add_subcommand("agreement", "Inter-annotator agreement report and word filter");
  c_ag->add_option("--judgments", ag.judgments, "Judgment TSV")->required()->check(CLI::ExistingFile);
  c_ag->add_option("--uses", ag.uses, "Usage TSV (resolves lemmas, POS and usage counts)")->check(CLI::ExistingFile);
  c_ag->add_option("--gold", ag.gold, "Gold TSV for the LSC columns")->check(CLI::ExistingFile);
  c_ag->add_option("--cluster-stats", ag.cluster_stats, "stats.tsv from wug-cluster")->check(CLI::ExistingFile);
  c_ag->add_option("--metric", ag.metric, "Alpha metric: ordinal or interval")
      ->capture_default_str()
      ->check(CLI::IsMember({"ordinal", "interval"}));
  c_ag->add_option("--threshold", ag.threshold, "Discard words with both alphas below this value")
      ->capture_default_str();
  c_ag->add_option("--out", ag.out, "Output report TSV")->required();
  c_ag->add_option("--kept", ag.kept, "Also write the words that pass the filter");
  add_seed(c_ag, ag.seed);

  auto* c_base = app.add_subcommand("baseline", "Run a baseline system and write a submission directory");
  c_base->require_subcommand(1);
  auto add_common = [](CLI::App* app, BaselineCommon& c, bool with_binarize) {
    app->add_option("--targets", c.targets, "Target list TSV")->required()->check(CLI::ExistingFile);
    app->add_option("--out", c.out, "Output submission directory")->required();
    if (with_binarize)
      app->add_option("--binarize", c.binarize, "Binary labels from graded scores: mean-std or changepoint")
          ->capture_default_str()
          ->check(CLI::IsMember({"mean-std", "changepoint"}));
    add_seed(app, c.seed);
  };

  SgnsOpts sg;
  auto* b_sgns = c_base->add_subcommand("sgns", "Skip-gram embeddings, Procrustes alignment, cosine distance");
  add_common(b_sgns, sg.common, true);
  add_corpus(b_sgns, "--c1", sg.c1, "C1 corpus source (needs lemmas)");
  add_corpus(b_sgns, "--c2", sg.c2, "C2 corpus source (needs lemmas)");
  b_sgns->add_option("--dim", sg.params.dim, "Embedding dimension")->capture_default_str();
  b_sgns->add_option("--window", sg.params.window, "Maximum context window")->capture_default_str();
  b_sgns->add_option("--epochs", sg.params.epochs, "Training epochs")->capture_default_str();
  b_sgns->add_option("--negatives", sg.params.negatives, "Negative samples per pair")->capture_default_str();
  b_sgns->add_option("--subsample", sg.params.subsample, "Frequent-word subsampling threshold (0: off)")
      ->capture_default_str();
  b_sgns->add_option("--alpha", sg.params.alpha, "Initial learning rate")->capture_default_str();
  b_sgns->add_option("--min-alpha", sg.params.min_alpha, "Final learning rate")->capture_default_str();
  b_sgns->add_option("--min-count", sg.params.min_count, "Drop words rarer than this")->capture_default_str();
  b_sgns->add_option("--workers", sg.params.workers, "Training threads (>1 is not reproducible)")
      ->capture_default_str();
  b_sgns->add_option("--save-embeddings", sg.save_embeddings, "Directory for the aligned embedding matrices");

  FreqOpts fq;
  auto* b_freq = c_base->add_subcommand("freq", "Normalized frequency difference");
  add_common(b_freq, fq.common, true);
  b_freq->add_option("--stats1", fq.stats1, "Vocabulary statistics for C1")->required()->check(CLI::ExistingFile);
  b_freq->add_option("--stats2", fq.stats2, "Vocabulary statistics for C2")->required()->check(CLI::ExistingFile);
  b_freq->add_option("--norm", fq.norm, "log (log f / log N) or per-log-total (f / log N)")
      ->capture_default_str()
      ->check(CLI::IsMember({"log", "per-log-total"}));

  ProfileOpts pr;
  auto* b_prof = c_base->add_subcommand("profile", "Cosine distance of grammatical profiles");
  add_common(b_prof, pr.common, true);
  add_corpus(b_prof, "--c1", pr.c1, "C1 corpus source (needs conllu)");
  add_corpus(b_prof, "--c2", pr.c2, "C2 corpus source (needs conllu)");
  b_prof->add_option("--features", pr.features, "all, morph or syntax")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "morph", "syntax"}));

  BaselineCommon mino;
  auto* b_min = c_base->add_subcommand("minority", "Label every target as changed");
  add_common(b_min, mino, false);

  BaselineCommon rnd;
  auto* b_rnd = c_base->add_subcommand("random", "Uniform random scores and labels");
  add_common(b_rnd, rnd, false);

  EvaluateOpts ev;
  auto* c_ev = app.add_subcommand("evaluate", "Score a submission directory against gold");
  c_ev->add_option("--gold", ev.gold, "Gold TSV")->required()->check(CLI::ExistingFile);
  c_ev->add_option("--submission", ev.submission, "Submission directory")->required();
  c_ev->add_option("--phase", ev.phase, "1: graded (+compare), 2: binary (+gain, loss)")
      ->capture_default_str()
      ->check(CLI::IsMember({1, 2}));
  c_ev->add_flag("--lenient", ev.lenient, "Score on the words present instead of failing on missing ones");
  c_ev->add_option("--out", ev.out, "Also write the scores as TSV");
  add_seed(c_ev, ev.seed);

  SweepOpts sw;
  auto* c_sw = app.add_subcommand("sweep", "F1 of top-p% labeling of graded predictions, p = 0, 5, ..., 100");
  c_sw->add_option("--gold", sw.gold, "Gold TSV")->required()->check(CLI::ExistingFile);
  c_sw->add_option("--predictions", sw.predictions, "Graded prediction TSV")->required()->check(CLI::ExistingFile);
  c_sw->add_option("--task", sw.task, "Gold labels to score against: binary, gain or loss")
      ->capture_default_str()
      ->check(CLI::IsMember({"binary", "gain", "loss"}));
  c_sw->add_flag("--lenient", sw.lenient, "Score on the words present instead of failing on missing ones");
  c_sw->add_option("--out", sw.out, "Output curve TSV")->required();
  add_seed(c_sw, sw.seed);

  SynthOpts sy;
  auto* c_sy = app.add_subcommand("synth-gen", "Generate a synthetic corpus pair with planted changes");
  c_sy->add_option("--out", sy.out, "Output directory")->required();
  c_sy->add_option("--vocab-size", sy.cfg.vocab_size, "Vocabulary size")->capture_default_str();
  c_sy->add_option("--sentences", sy.cfg.sentences, "Sentences per corpus")->capture_default_str();
  c_sy->add_option("--sentence-length", sy.cfg.sentence_length, "Tokens per sentence")->capture_default_str();
  c_sy->add_option("--topics", sy.cfg.topics, "Number of topics")->capture_default_str();
  c_sy->add_option("--planted-changes", sy.cfg.planted_changes, "Words whose C2 usage moves to another topic")
      ->capture_default_str();
  c_sy->add_option("--shift", sy.cfg.shift, "Share of a planted word's C2 occurrences in the new topic")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  c_sy->add_option("--annotated-words", sy.cfg.annotated_words, "Words with simulated judgments")
      ->capture_default_str();
  c_sy->add_option("--usages", sy.cfg.usages_per_period, "Sampled usages per word and period")->capture_default_str();
  c_sy->add_option("--annotators", sy.cfg.annotators, "Simulated annotators")->capture_default_str();
  c_sy->add_option("--pairs", sy.cfg.pairs_per_word, "Judged usage pairs per word")->capture_default_str();
  c_sy->add_option("--noise", sy.cfg.annotation_noise, "Probability of an off-by-one judgment")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  c_sy->add_option("--seed", sy.cfg.seed, "Random seed, recorded in every output header")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*c_ingest) run_ingest(ingest);
    else if (*c_targets) run_targets(targets);
    else if (*c_sample) run_sample(sample);
    else if (*c_wb) run_wug_build(wb);
    else if (*c_wc) run_wug_cluster(wc);
    else if (*c_gold) run_gold_scores(gold);
    else if (*c_ag) run_agreement(ag);
    else if (*b_sgns) run_baseline_sgns(sg);
    else if (*b_freq) run_baseline_freq(fq);
    else if (*b_prof) run_baseline_profile(pr);
    else if (*b_min) run_baseline_minority(mino);
    else if (*b_rnd) run_baseline_random(rnd);
    else if (*c_ev) run_evaluate(ev);
    else if (*c_sw) run_sweep(sw);
    else if (*c_sy) run_synth(sy);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
