#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>

#include "support.hpp"
#include "tggdbg/conformance.hpp"
#include "tggdbg/serialization.hpp"

namespace tgg {
namespace {

namespace fs = std::filesystem;
using testing::companyToIt;
using testing::fixturePath;

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(TGGDBG_CLI) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tggdbg_cli_" + std::to_string(getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string ruleset() { return fixturePath("companytoit.ruleset.json").string(); }
  static std::string source() { return fixturePath("company.source.json").string(); }

  fs::path dir_;
};

TEST_F(Cli, ValidateFixture) {
  EXPECT_EQ(run("validate --ruleset " + ruleset() + " --input " + source()).status, 0);
  const Outcome r = run("--json validate --ruleset " + ruleset());
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(Json::parse(r.out).is_object());
}

TEST_F(Cli, ValidateReportsBrokenRules) {
  Json doc = Json::parse(readFile(ruleset()));
  for (auto& rule : doc["payload"]["rules"]) {
    for (auto& e : rule["edges"]) {
      if (e["id"] == "companyAdmin") e["annotation"] = "BLACK";
    }
  }
  writeFile(path("broken.json"), doc.dump(2));
  EXPECT_EQ(run("validate --ruleset " + path("broken.json")).status, 1);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("teleport").status, 2);
  EXPECT_EQ(run("gen --ruleset " + ruleset()).status, 2);
  EXPECT_EQ(run("validate --ruleset " + path("missing.json")).status, 3);
  writeFile(path("bad.json"), "{");
  EXPECT_EQ(run("validate --ruleset " + path("bad.json")).status, 3);
}

TEST_F(Cli, GenerateTenSteps) {
  ASSERT_EQ(run("gen --ruleset " + ruleset() + " --seed 7 --max-steps 10 --out " + path("g.json") + " --protocol " +
                path("g.proto.json"))
                .status,
            0);
  const TripleGraph g = loadTriple(readFile(path("g.json")), companyToIt()->metamodel);
  EXPECT_TRUE(checkConformance(g, companyToIt()->metamodel).empty());
  EXPECT_EQ(loadProtocol(readFile(path("g.proto.json")), *companyToIt()).applications.size(), 10u);
}

TEST_F(Cli, ForwardTranslatesTheFixture) {
  const Outcome r = run("--json fwd --ruleset " + ruleset() + " --input " + source() + " --seed 3 --out " +
                    path("out.json") + " --protocol " + path("proto.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  const Json result = Json::parse(r.out);
  EXPECT_EQ(result["complete"], true);
  const TripleGraph out = loadTriple(readFile(path("out.json")), companyToIt()->metamodel);
  const auto counts = testing::typeCounts(out, Domain::Target);
  EXPECT_EQ(counts.at("Router"), 2);
  EXPECT_EQ(counts.at("Network"), 2);
  EXPECT_EQ(loadProtocol(readFile(path("proto.json")), *companyToIt()).applications.size(), 4u);
}

TEST_F(Cli, IncompleteForwardRunFails) {
  writeFile(path("in.json"), saveTriple(testing::companySource(0, 1)));
  const Outcome r = run("fwd --ruleset " + ruleset() + " --input " + path("in.json") + " --out " + path("out.json"));
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("INCOMPLETE"), std::string::npos);
}

TEST_F(Cli, RunsAreDeterministic) {
  for (const char* tag : {"a", "b"}) {
    ASSERT_EQ(run("gen --ruleset " + ruleset() + " --seed 42 --max-steps 25 --out " + path(std::string(tag) + ".json") +
                  " --protocol " + path(std::string(tag) + ".proto.json"))
                  .status,
              0);
  }
  EXPECT_EQ(readFile(path("a.json")), readFile(path("b.json")));
  EXPECT_EQ(readFile(path("a.proto.json")), readFile(path("b.proto.json")));
}

TEST_F(Cli, ReplayOutputIsByteStable) {
  ASSERT_EQ(run("fwd --ruleset " + ruleset() + " --input " + source() + " --seed 9 --out " + path("out.json") +
                " --protocol " + path("proto.json"))
                .status,
            0);
  const ProtocolDocument doc = loadProtocol(readFile(path("proto.json")), *companyToIt());
  for (std::size_t k = 0; k < doc.applications.size(); ++k) {
    const std::string file = path("at" + std::to_string(k) + ".json");
    ASSERT_EQ(run("replay --ruleset " + ruleset() + " --protocol " + path("proto.json") + " --at " +
                  std::to_string(k) + " --out " + file)
                  .status,
              0);
    const std::string text = readFile(file);
    EXPECT_EQ(saveTriple(loadTriple(text, companyToIt()->metamodel)), text);
    EXPECT_EQ(text, saveTriple(replay(*companyToIt(), doc.initial, doc.applications, k + 1).triple));
  }
  EXPECT_EQ(readFile(path("at" + std::to_string(doc.applications.size() - 1) + ".json")), readFile(path("out.json")));
  // Step 0 is the axiom: the source plus the IT root and its corr.
  const TripleGraph first = loadTriple(readFile(path("at0.json")), companyToIt()->metamodel);
  EXPECT_EQ(first.size(), doc.initial.size() + 2);
  EXPECT_EQ(doc.applications[0].ruleName, "CompanyToITRule");
  EXPECT_EQ(run("replay --ruleset " + ruleset() + " --protocol " + path("proto.json") + " --at 99 --out " +
                path("x.json"))
                .status,
            2);
}

TEST_F(Cli, RuleDiagramMatchesGolden) {
  const Outcome r = run("diagram --ruleset " + ruleset() + " --rule CompanyToITRule");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, readFile(testing::goldenPath("axiom_rule.puml").string()));
}

}  // namespace
}  // namespace tgg
