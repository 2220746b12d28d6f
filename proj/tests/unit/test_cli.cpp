// Copyright 2026 The INAUT Authors.
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


#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args, bool with_data = true) {
  if (with_data) {
    args.insert(args.begin(), {"--kb", testing::data_path("fixtures/banyuls_kb.json"), "--doc",
                               testing::data_path("fixtures/banyuls_doc.json")});
  }
  std::ostringstream out, err;
  const int code = inaut::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string &name, const std::string &text) {
  const fs::path p = fs::temp_directory_path() / ("inaut-cli-" + std::to_string(::getpid()) + "-" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST_CASE("generate is byte-identical across runs") {
  for (const std::string format : {"text", "html", "json-plan"}) {
    const RunResult a = run({"generate", "--format", format});
    const RunResult b = run({"generate", "--format", format});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
  CHECK(run({"generate"}).out.find(testing::kGoldenParagraph) != std::string::npos);
}

TEST_CASE("generate writes the plan on request") {
  const fs::path plan = fs::temp_directory_path() / ("inaut-cli-plan-" + std::to_string(::getpid()) + ".json");
  const RunResult r = run({"generate", "--emit-plan", plan.string()});
  REQUIRE(r.code == 0);
  const json j = json::parse(testing::read_file(plan.string()));
  CHECK(!j.empty());
  fs::remove(plan);
}

TEST_CASE("plan of one leaf") {
  const RunResult r = run({"plan", "--leaf", "2.2.4.1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["litinaut"] == testing::kGoldenParagraph);
  CHECK(run({"plan", "--leaf", "9.9"}).code != 0);
}

TEST_CASE("missing inputs") {
  const RunResult missing = run({"--kb", "/nonexistent/kb.json", "generate"}, false);
  CHECK(missing.code == inaut::cli::kValidationFailure);
  CHECK(missing.err.find("file not found") != std::string::npos);
  CHECK(run({"generate"}, false).code == inaut::cli::kConfigError);
  CHECK(run({}, false).code == inaut::cli::kConfigError);
  CHECK(run({"frobnicate"}, false).code == inaut::cli::kConfigError);
}

TEST_CASE("validate files") {
  const RunResult corpus = run({"validate", testing::data_path("fixtures/corpus.inaut")});
  CHECK(corpus.code == 0);
  CHECK(corpus.out.find("0 diagnostic(s)") != std::string::npos);

  const fs::path bad = write_temp("bad.inaut", "# comment\nLe portt est bordé par la côte.\n");
  const RunResult r = run({"validate", bad.string()});
  CHECK(r.code == inaut::cli::kValidationFailure);
  CHECK(r.err.find("hint: port") != std::string::npos);
  CHECK(r.err.find(":2:") != std::string::npos);

  const RunResult j = run({"--json", "validate", bad.string()});
  CHECK(j.code == inaut::cli::kValidationFailure);
  std::istringstream lines(j.err);
  int n = 0;
  for (std::string line; std::getline(lines, line); ++n) {
    const json d = json::parse(line);
    CHECK(d.contains("code"));
  }
  CHECK(n >= 1);
  fs::remove(bad);

  const RunResult none = run({"validate"});
  CHECK(none.code == 0);
  CHECK(none.err.find("warning") != std::string::npos);
}

TEST_CASE("kb export and import round-trip") {
  const RunResult exported = run({"kb", "export"});
  REQUIRE(exported.code == 0);
  const fs::path p = write_temp("kb.json", exported.out);
  const RunResult imported = run({"kb", "import", p.string()}, false);
  REQUIRE(imported.code == 0);
  CHECK(imported.out == exported.out);
  CHECK(run({"kb", "export", "--dot"}).out.rfind("graph", 0) == 0);

  const fs::path broken = write_temp("broken.json", "{\"instances\": [");
  CHECK(run({"kb", "import", broken.string()}, false).code == inaut::cli::kValidationFailure);
  fs::remove(p);
  fs::remove(broken);
}
