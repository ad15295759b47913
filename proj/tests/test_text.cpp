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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "lsc/error.hpp"
#include "lsc/text.hpp"
#include "lsc/tsv.hpp"
#include "test_util.hpp"

using namespace lsc;

TEST_CASE("lemma normalization composes and folds case") {
  CHECK(normalize_lemma("Gato") == "gato");
  CHECK(normalize_lemma("cafe\xCC\x81") == "caf\xC3\xA9");  // decomposed e + acute
  CHECK(normalize_lemma("CAF\xC3\x89") == "caf\xC3\xA9");
  CHECK(normalize_lemma("Stra\xC3\x9F" "e") == "strasse");
}

TEST_CASE("code point helpers") {
  CHECK(codepoint_length("año") == 3);
  CHECK(to_utf8(to_u32("…sexos;")) == "…sexos;");
  CHECK(is_punctuation(U';'));
  CHECK(is_punctuation(U'¿'));
  CHECK_FALSE(is_punctuation(U'ñ'));
  CHECK(is_word_char(U'ñ'));
}

TEST_CASE("string splitting") {
  CHECK(split_ws("  a \t b  c ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split("a\t\tb", '\t') == std::vector<std::string>{"a", "", "b"});
  CHECK(trim("  x y \n") == "x y");
  CHECK(join({"a", "b"}, ", ") == "a, b");
}

TEST_CASE("TSV tables are header driven with comment metadata") {
  const auto t = TsvTable::parse("# lsc-toolkit version=0.1.0 seed=9\nb\ta\n2\t1\n# note\n4\n");
  CHECK(t.meta().at("seed") == "9");
  CHECK(t.size() == 2);
  CHECK(t.at(0, "a") == "1");
  CHECK(t.at(1, "a") == "");
  CHECK(t.line_of(1) == 5);
  CHECK_THROWS_AS(t.column("c"), FormatError);
  CHECK_THROWS_AS(TsvTable::parse("a\n1\t2\n"), ParseError);
}

TEST_CASE("doubles round trip exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) CHECK(parse_double(format_double(v), "x", 1) == v);
  CHECK_FALSE(parse_optional("", "x", 1));
  CHECK_FALSE(parse_optional("NA", "x", 1));
  CHECK_THROWS_AS(parse_double("abc", "x", 1), ParseError);
}

TEST_CASE("writers start with the provenance line") {
  testutil::TempDir dir("tsv");
  {
    TsvWriter w(dir / "o.tsv", 42, {"x"});
    w.row({"1"});
  }
  CHECK(testutil::read_file(dir / "o.tsv") == provenance_line(42) + "\nx\n1\n");
  CHECK(provenance_line(42) == "# lsc-toolkit version=" + std::string(kToolVersion) + " seed=42");
}
