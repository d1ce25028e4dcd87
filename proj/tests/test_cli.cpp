#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli/config.hpp"
#include "cli/runner.hpp"

using namespace spinwire;
using namespace spinwire::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spinwire-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_doc(const Json& doc, const fs::path& out, std::size_t jobs = 1) {
  RunOptions opts;
  opts.out_dir = out;
  opts.jobs = jobs;
  std::ostringstream log, err;
  return run_and_report(doc, opts, log, err);
}

Json two_site_trace() {
  return Json::parse(R"({
    "experiment": "trace", "name": "two",
    "chain": {"n_sites": 2, "profile": {"kind": "uniform", "j": 1.0}},
    "window": {"t_max": 1.5707963267948966, "step": 0.007853981633974483}
  })");
}

int shell(const std::string& args) {
  const std::string cmd = std::string(SPINWIRE_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, DefaultsAndOverlay) {
  const Json r = resolve(Json::parse(R"({"chain": {"n_sites": 10}})"));
  EXPECT_EQ(r["chain"]["n_sites"], 10);
  EXPECT_EQ(r["convention"], "modulus");
  EXPECT_EQ(r["disorder"]["tau"], 0.1);
}

TEST(Config, UnknownKeyNamesTheKey) {
  try {
    resolve(Json::parse(R"({"chain": {"n_sitez": 10}})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("n_sitez"), std::string::npos);
  }
}

TEST(Config, TypeMismatchRejected) {
  EXPECT_THROW(resolve(Json::parse(R"({"chain": {"n_sites": "many"}})")), ConfigError);
  EXPECT_THROW(prepare(Json::parse(R"({"convention": "amplitude"})")), ConfigError);
  EXPECT_THROW(prepare(Json::parse(R"({"experiment": "bogus"})")), ConfigError);
  EXPECT_THROW(prepare(Json::parse(R"({"chain": {"n_sites": 1}})")), ConfigError);
}

TEST(Config, SetOverrides) {
  Json doc = Json::object();
  apply_override(doc, "chain.n_sites=64");
  apply_override(doc, "chain.profile.kind=pst");
  apply_override(doc, "disorder.gamma=0.1");
  const ResolvedRun run = prepare(doc);
  EXPECT_EQ(run.chain.n_sites, 64u);
  EXPECT_EQ(run.chain.couplings, build_profile(profile::PST{1.0}, 64));
  EXPECT_EQ(run.disorder.gamma, 0.1);
  EXPECT_THROW(apply_override(doc, "chain.nope=1"), ConfigError);
  EXPECT_THROW(apply_override(doc, "no-equals-sign"), ConfigError);
}

TEST(Config, EveryPresetResolves) {
  ASSERT_GE(presets().size(), 10u);
  for (const Preset& p : presets()) {
    EXPECT_NO_THROW(prepare(p.config)) << p.name;
    EXPECT_FALSE(p.description.empty()) << p.name;
  }
  EXPECT_THROW(find_preset("no-such-preset"), ConfigError);
}

TEST(Config, CaseProfile) {
  const ResolvedRun run = prepare(Json::parse(R"({"chain": {"n_sites": 20, "profile": {"kind": "case", "case": 5}}})"));
  EXPECT_EQ(run.chain.sender, 4u);
  EXPECT_EQ(run.chain.receiver, 17u);
}

TEST(Runner, FormatsSeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Runner, TwoSiteTracePeaksAtQuarterPi) {
  const fs::path out = scratch("two");
  ASSERT_EQ(run_doc(two_site_trace(), out), kExitOk);
  std::ifstream csv(out / "trace.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,re_A,im_A,F");
  std::vector<std::pair<double, double>> rows;
  while (std::getline(csv, line)) {
    double t, re, im, f;
    char c;
    std::istringstream ss(line);
    ss >> t >> c >> re >> c >> im >> c >> f;
    rows.emplace_back(t, f);
  }
  ASSERT_EQ(rows.size(), 201u);
  EXPECT_NEAR(rows[100].first, std::numbers::pi / 4.0, 1e-15);
  EXPECT_NEAR(rows[100].second, 1.0, 1e-12);
  for (const auto& r : rows) EXPECT_LE(r.second, rows[100].second + 1e-15);
}

TEST(Runner, ManifestChecksumsMatchFiles) {
  const fs::path out = scratch("manifest");
  ASSERT_EQ(run_doc(two_site_trace(), out), kExitOk);
  const Json m = Json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(m["version"], kToolVersion);
  EXPECT_EQ(m["conventions"]["fidelity"], "modulus");
  EXPECT_EQ(m["config"]["chain"]["n_sites"], 2);
  ASSERT_FALSE(m["outputs"].empty());
  for (const auto& o : m["outputs"]) {
    const std::string body = slurp(out / o["file"].get<std::string>());
    EXPECT_EQ(o["bytes"].get<std::size_t>(), body.size());
    EXPECT_EQ(o["sha256"], sha256_hex(body));
  }
}

TEST(Runner, EnsembleBytesIndependentOfJobs) {
  const Json doc = Json::parse(R"({
    "experiment": "ensemble", "name": "ens",
    "chain": {"n_sites": 16, "profile": {"kind": "pst"}},
    "disorder": {"gamma": 0.05, "epsilon": 0.05, "seed": 5},
    "ensemble": {"realizations": 9},
    "window": {"t_max": 20.0, "step": 0.01}
  })");
  const fs::path a = scratch("ens1"), b = scratch("ens8");
  ASSERT_EQ(run_doc(doc, a, 1), kExitOk);
  ASSERT_EQ(run_doc(doc, b, 8), kExitOk);
  EXPECT_EQ(slurp(a / "ensemble.csv"), slurp(b / "ensemble.csv"));
  EXPECT_EQ(slurp(a / "stats.json"), slurp(b / "stats.json"));
}

TEST(Runner, ContourAndThresholdArtifacts) {
  const Json contour = Json::parse(R"({
    "experiment": "contour", "name": "c",
    "chain": {"n_sites": 12},
    "contour": {"parameter": "chain.profile.j0", "values": [0.1, 0.2]},
    "window": {"t_max": 50.0, "step": 0.5}
  })");
  const fs::path c = scratch("contour");
  ASSERT_EQ(run_doc(contour, c), kExitOk);
  const std::string body = slurp(c / "contour.csv");
  EXPECT_EQ(body.substr(0, body.find('\n')), "param,t,F");
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 1 + 2 * 101);

  const Json threshold = Json::parse(R"({
    "experiment": "threshold", "name": "th",
    "chain": {"n_sites": 2, "profile": {"kind": "uniform"}},
    "threshold": {"parameter": "disorder.epsilon", "target": 0.9, "lo": 0.0, "hi": 4.0, "tol": 0.01,
                  "scan_points": 0, "realizations": 4},
    "window": {"t_max": 2.0, "step": 0.01}
  })");
  const fs::path t = scratch("threshold");
  ASSERT_EQ(run_doc(threshold, t), kExitOk);
  const Json doc = Json::parse(slurp(t / "threshold.json"));
  EXPECT_TRUE(doc.contains("value"));
}

TEST(Runner, ExitCodes) {
  EXPECT_EQ(run_doc(Json::parse(R"({"bogus": 1})"), scratch("bad")), kExitConfig);
  const fs::path blocker = scratch("blocker");
  { std::ofstream(blocker) << "x"; }
  EXPECT_EQ(run_doc(two_site_trace(), blocker / "sub"), kExitIo);
  fs::remove(blocker);
}

TEST(Runner, OracleCheckPasses) {
  const fs::path out = scratch("oracle");
  Json doc = find_preset("oracle").config;
  ASSERT_EQ(run_doc(doc, out), kExitOk);
  const Json report = Json::parse(slurp(out / "oracle.json"));
  EXPECT_LE(report["max_abs_diff"].get<double>(), 1e-8);
}

TEST(Binary, CommandLine) {
  const fs::path out = scratch("bin");
  EXPECT_EQ(shell("presets"), 0);
  EXPECT_EQ(shell("oracle-check --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  EXPECT_EQ(shell("run --preset no-such-thing"), 1);
  EXPECT_EQ(shell("run --preset oracle --set oracle.bogus=1"), 1);
  EXPECT_EQ(shell("run"), 1);
  EXPECT_NE(shell("frobnicate"), 0);
}
