#include <sstream>

#include <gtest/gtest.h>

#include "bratteli/cli.hpp"
#include "cases.hpp"

using namespace bratteli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "bratteli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, AnalyzeReportsMeasures) {
  auto r = run({"analyze", cases::sample_path("b2.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "Borel invariant: 1"));
  EXPECT_TRUE(has(r.out, "1 ergodic probability measure; 2 σ-finite measures"));
  EXPECT_TRUE(has(r.out, "(1, inf, 0)"));
}

TEST(Cli, AnalyzeJson) {
  auto r = run({"analyze", "--json", cases::sample_path("two_blocks.json")});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["measures"].size(), 2u);
  EXPECT_EQ(j["measures"][1]["eigenvector"][0], "2/3");
  EXPECT_EQ(j["measures"][1]["type"], "ergodic-finite");
}

TEST(Cli, CylinderValues) {
  auto r = run({"cylinder", cases::sample_path("b1.json"), "--measure", "tail:1", "--path", "1 1 1"});
  EXPECT_EQ(r.out, "inf\n");
  r = run({"cylinder", cases::sample_path("b1.json"), "--measure", "tail:1", "--path", "2 2 2"});
  EXPECT_EQ(r.out, "1/4\n");
  r = run({"cylinder", cases::sample_path("two_blocks.json"), "--measure", "2", "--path", "1 2", "--sum-check"});
  EXPECT_EQ(r.out, "1\n");
  r = run({"cylinder", cases::sample_path("two_blocks.json"), "--path", "1 1:5"});
  EXPECT_EQ(r.code, cli::kParse);
}

TEST(Cli, SubstitutionCylinder) {
  auto d = run({"subst", "diagram", cases::sample_path("two_minimal.subst.json")});
  ASSERT_EQ(d.code, 0);
  auto doc = parse_diagram(d.out);
  EXPECT_EQ(doc.diagram.name(4), "1");
}

TEST(Cli, EigenvaluesSearch) {
  auto r = run({"eigenvalues", cases::sample_path("two_blocks.json"), "--qmax", "64"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "weak-mixing evidence: only θ=0"));
  r = run({"eigenvalues", cases::sample_path("five_adic.json"), "--qmax", "25", "--jobs", "2"});
  EXPECT_TRUE(has(r.out, " 1/5 ") && has(r.out, " 1/25 ") && has(r.out, " 24/25"));
  r = run({"eigenvalues", cases::sample_path("five_adic.json"), "--class", "2"});
  EXPECT_EQ(r.code, cli::kPrecondition);
}

TEST(Cli, SubstCommands) {
  auto m = run({"subst", "matrix", cases::sample_path("sigma.subst.json")});
  EXPECT_EQ(m.out, "1 1 1\n2 1 1\n0 0 2\n");
  auto e = run({"subst", "expand", cases::sample_path("sigma.subst.json"), "-n", "2"});
  EXPECT_EQ(e.out, "abbabab\n");
  auto f = run({"subst", "freqs", cases::sample_path("sigma.subst.json"), "--letter", "c", "-n", "1"});
  EXPECT_EQ(f.out, "a 1/4\nb 1/4\nc 1/2\n");
  auto u = run({"subst", "measures", cases::sample_path("tau.subst.json")});
  EXPECT_TRUE(has(u.out, "uniquely ergodic: no"));
  auto bad = run({"subst", "bogus", cases::sample_path("tau.subst.json")});
  EXPECT_EQ(bad.code, cli::kParse);
}

TEST(Cli, VerifyAndCorruptedMeasure) {
  auto ok = run({"verify", cases::sample_path("two_blocks.json"), "--depth", "4"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(has(ok.out, "all checks passed"));
  const std::string path = testing::TempDir() + "/corrupt.json";
  {
    std::ofstream f(path);
    f << R"({"p1": ["1/2", "1/2"]})";
  }
  auto bad = run({"verify", cases::sample_path("two_blocks.json"), "--depth", "3", "--measure", path});
  EXPECT_EQ(bad.code, cli::kVerification);
  EXPECT_TRUE(has(bad.out, "violation"));
}

TEST(Cli, ExportDot) {
  auto r = run({"export-dot", cases::sample_path("two_blocks.json")});
  EXPECT_TRUE(has(r.out, "c2 -> c1;"));
  r = run({"export-dot", cases::sample_path("two_blocks.json"), "--orientation", "A"});
  EXPECT_TRUE(has(r.out, "c1 -> c2;"));
  r = run({"export-dot", cases::sample_path("b1.json"), "--graph", "levels", "--levels", "2"});
  EXPECT_TRUE(has(r.out, "n1_1 -> n2_2;"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, cli::kParse);
  EXPECT_EQ(run({"analyze", "/nonexistent.json"}).code, cli::kParse);
  EXPECT_EQ(run({"analyze", cases::sample_path("b1.json"), "--telescope", "zero"}).code, cli::kParse);
  const std::string path = testing::TempDir() + "/identity.json";
  {
    std::ofstream f(path);
    f << R"({"n": 2, "incidence": [[1, 0], [0, 1]]})";
  }
  auto r = run({"analyze", path});
  EXPECT_EQ(r.code, cli::kPrecondition);
  EXPECT_TRUE(has(r.err, "not aperiodic"));
  {
    std::ofstream f(path);
    f << R"({"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "b"}})";
  }
  EXPECT_EQ(run({"subst", "measures", path}).code, cli::kPrecondition);
  EXPECT_EQ(run({"subst", "expand", cases::sample_path("sigma.subst.json"), "-n", "40"}).code, cli::kCap);
}
