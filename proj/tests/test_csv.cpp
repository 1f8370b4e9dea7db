/*
 * Copyright 2026 The famglm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "famglm/csv.hpp"
#include "famglm/rng.hpp"
#include "helpers.hpp"

using namespace famglm;

TEST_CASE("float formatting round-trips exactly") {
  Rng rng(71);
  for (int i = 0; i < 1000; ++i) {
    double value;
    switch (i % 4) {
      case 0: value = rng.normal(); break;
      case 1: value = rng.normal() * 1e300; break;
      case 2: value = rng.normal() * 1e-300; break;
      default: value = static_cast<double>(rng.next_u64() % 1000); break;
    }
    CHECK(parse_float(format_float(value)) == value);
  }
  CHECK(parse_float(format_float(0.1)) == 0.1);
  CHECK_THROWS_AS(parse_float("12x"), Error);
  CHECK_THROWS_AS(parse_float(""), Error);
}

TEST_CASE("csv writer and reader round-trip awkward fields") {
  testutil::TempDir dir("csv");
  const auto path = dir.path() / "t.csv";
  {
    CsvWriter writer(path);
    writer.write_row({"plain", "with,comma", "with\"quote", "multi\nline"});
    writer.write_row({"", "x", "", ""});
  }
  const auto rows = read_csv(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "plain");
  CHECK(rows[0][1] == "with,comma");
  CHECK(rows[0][2] == "with\"quote");
  CHECK(rows[0][3] == "multi\nline");
  CHECK(rows[1][0].empty());
  CHECK(rows[1][1] == "x");
}

TEST_CASE("csv reader handles both line endings and no trailing newline") {
  testutil::TempDir dir("csv2");
  const auto unix_path = dir.path() / "unix.csv";
  testutil::write_file(unix_path, "a,b\n1,2");
  const auto rows = read_csv(unix_path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][1] == "2");

  const auto crlf_path = dir.path() / "crlf.csv";
  testutil::write_file(crlf_path, "a,b\r\n1,2\r\n");
  const auto rows2 = read_csv(crlf_path);
  REQUIRE(rows2.size() == 2);
  CHECK(rows2[1][0] == "1");

  const auto bad = dir.path() / "bad.csv";
  testutil::write_file(bad, "a,\"unterminated\n");
  CHECK_THROWS_MATCHES(read_csv(bad), Error, Catch::Matchers::Predicate<Error>(
      [](const Error& e) { return e.code() == errc::malformed_file; }));
}
