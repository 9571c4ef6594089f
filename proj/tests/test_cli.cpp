#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pingpong/cli.hpp"

using namespace pingpong;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  io::Json report() const { return io::Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pingpong");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("pingpong_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

const char* kDiag = R"({"schema": 1, "field": {"kind": "real"}, "matrices": {"g": [[4, 0], [0, 0.25]]}})";
const char* kCommuting =
    R"({"schema": 1, "field": {"kind": "real"}, "matrices": {"a": [[2, 0], [0, 0.5]], "b": [[3, 0], [0, "1/3"]]}})";
const char* kGamma = R"({"schema": 1, "field": {"kind": "real"}, "matrices": {"gamma": [[1000, 0], [0, 0.001]]}})";
const char* kIdentityPair =
    R"({"schema": 1, "field": {"kind": "real"}, "matrices": {"a1": [[1, 0], [0, 1]], "a2": [[1, 0], [0, 1]]}})";

std::string rotation_set() {
  std::ostringstream s;
  s.precision(17);
  s << R"({"schema": 1, "field": {"kind": "real"}, "matrices": {)";
  for (int k = 0; k < 8; ++k) {
    const double t = k * M_PI / 8;
    s << (k ? ", " : "") << "\"R" << k << "\": [[" << std::cos(t) << ", " << -std::sin(t) << "], [" << std::sin(t)
      << ", " << std::cos(t) << "]]";
  }
  s << R"(}, "set": {"m": 2, "r": 0.2}})";
  return s.str();
}

// every number under `j` sits inside a {"value", "provenance"} pair
bool tagged(const io::Json& j, bool inside_value = false) {
  if (j.is_number()) return inside_value;
  if (j.is_array()) {
    for (const auto& x : j)
      if (!tagged(x, inside_value)) return false;
    return true;
  }
  if (j.is_object()) {
    if (j.contains("value") && j.contains("provenance")) {
      const auto p = j["provenance"].get<std::string>();
      return (p == "exact" || p == "tolerance" || p == "estimate") && tagged(j["value"], true);
    }
    for (const auto& [k, v] : j.items())
      if (!tagged(v, inside_value)) return false;
    return true;
  }
  return true;
}

}  // namespace

TEST_F(Cli, CartanDiagonal) {
  const auto r = run({"cartan", "--in", write("g.json", kDiag)});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_EQ(rep["schema"], 1);
  EXPECT_EQ(rep["command"], "cartan");
  EXPECT_EQ(rep["result"]["a"]["value"][0].get<double>(), 4.0);
  EXPECT_EQ(rep["result"]["a"]["value"][1].get<double>(), 0.25);
  EXPECT_EQ(rep["inputs_digest"].get<std::string>().size(), 64u);
  EXPECT_TRUE(tagged(rep["result"]));
}

TEST_F(Cli, FalsifyCommuting) {
  const auto r = run({"falsify", "--gens", write("c.json", kCommuting), "--max-len", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.report()["result"]["word"], "aba⁻¹b⁻¹");
  EXPECT_FALSE(r.report()["pass"].get<bool>());
  EXPECT_TRUE(tagged(r.report()["result"]));
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run({"cartan", "--in", write("bad.json", "{\"schema\": 1, \"field\": ")}).code, 2);
  EXPECT_EQ(run({"cartan", "--in", (dir_ / "missing.json").string()}).code, 2);
  EXPECT_EQ(run({"cartan", "--in", write("f.json", R"({"schema": 1, "field": {"kind": "octonion"}, "matrices": {}})")}).code,
            2);
  // determinant 2
  const auto r = run({"cartan", "--in", write("d.json", R"({"schema": 1, "field": {"kind": "real"}, "matrices": {"g": [[2, 0], [0, 1]]}})")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.report()["error"].contains("path"));
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  // sampling commands need a seed
  EXPECT_EQ(run({"contract-analyze", "--in", write("g.json", kGamma)}).code, 2);
}

TEST_F(Cli, PreconditionError) {
  // ||g - I|| is far above 1
  const auto r = run({"dense-check", "--gens", write("c.json", kCommuting)});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.report()["error"]["kind"], "precondition");
}

TEST_F(Cli, DeterministicReports) {
  const auto g = write("g.json", kGamma);
  const auto a = run({"contract-analyze", "--in", g, "--seed", "5", "--samples", "2000", "--threads", "1"});
  const auto b = run({"contract-analyze", "--in", g, "--seed", "5", "--samples", "2000", "--threads", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto c = run({"contract-analyze", "--in", g, "--seed", "6", "--samples", "2000"});
  EXPECT_NE(a.out, c.out);
  EXPECT_TRUE(tagged(a.report()["result"]));
}

TEST_F(Cli, OutFile) {
  const auto out = (dir_ / "report.json").string();
  const auto r = run({"--out", out, "cartan", "--in", write("g.json", kDiag)});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  const auto rep = io::Json::parse(f);
  EXPECT_EQ(rep["command"], "cartan");
}

TEST_F(Cli, CertifyBuildAndVerify) {
  const auto gens = write("a.json", kIdentityPair);
  const auto sep = write("F.json", rotation_set());
  const auto gamma = write("gamma.json", kGamma);
  const auto r = run({"certify-free", "--gens", gens, "--sep", sep, "--gamma", gamma, "--build", "--seed", "1",
                      "--falsify-len", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_TRUE(rep["pass"].get<bool>());
  EXPECT_TRUE(tagged(rep["result"]));

  // the identity pair is not a ping-pong pair
  const auto v = run({"certify-free", "--gens", gens, "--verify-only"});
  EXPECT_EQ(v.code, 1);
  EXPECT_EQ(run({"certify-free", "--gens", gens, "--sep", sep, "--build", "--seed", "1"}).code, 2);
}

TEST_F(Cli, SeparateAndDense) {
  const auto r = run({"separate", "--set", write("F.json", rotation_set()), "--trials", "2000", "--seed", "3"});
  ASSERT_TRUE(r.code == 0 || r.code == 1) << r.err;
  const auto rep = r.report();
  EXPECT_EQ(rep["result"]["r_estimate"]["provenance"], "estimate");
  EXPECT_EQ(rep["seed"], 3);
  EXPECT_TRUE(tagged(rep["result"]));

  const auto near = write("n.json", R"({"schema": 1, "field": {"kind": "real"},
    "matrices": {"x": [[1, 0.1], [0, 1]], "y": [[1, 0], [0.1, 1]]}})");
  const auto d = run({"dense-check", "--gens", near});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.report()["result"]["dimension"]["value"], 3);
  EXPECT_TRUE(tagged(d.report()["result"]));
}

TEST_F(Cli, PadicCartan) {
  const auto g = write("q.json", R"({"schema": 1, "field": {"kind": "padic", "prime": 5, "precision": 20},
    "matrices": {"g": [["1/125", 0], [0, 125]]}})");
  const auto r = run({"cartan", "--in", g});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_EQ(rep["field"]["prime"], 5);
  EXPECT_EQ(rep["result"]["exponents"]["value"], io::Json::parse("[-3, 3]"));
  EXPECT_EQ(rep["result"]["exponents"]["provenance"], "exact");
  EXPECT_TRUE(tagged(rep["result"]));
}
