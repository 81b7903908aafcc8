#include <json.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs the CLI with stdout captured; stderr is merged when asked.
Outcome run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(KODAIRA_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string("'") + KODAIRA_SAMPLES_DIR + "/" + name + "'"; }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST(Cli, ReportText) {
  Outcome r = run("report " + sample("specs/abelian.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "tangent bundle          psef"));
  EXPECT_TRUE(contains(r.out, "T_S pseudo-effective iff S is minimal and c2(S) = 0"));
}

TEST(Cli, ReportJson) {
  Outcome r = run("report --json " + sample("specs/isotrivial_g1.json"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["c2"], 12);
  EXPECT_EQ(j["kappa"], "1");
  EXPECT_EQ(j["tangent_psef"], "not-psef");
  EXPECT_EQ(j["y_restriction"]["criterion"], "fires");
  EXPECT_EQ(j["y_restriction"]["witnesses"][0]["exceptional"], "Y_{5,6}");
  EXPECT_TRUE(j["kappa_PT"].is_null());
}

TEST(Cli, GoldenVerdicts) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"abelian", "psef"},          {"k3", "not-psef"},           {"rational_elliptic", "out-of-scope"},
      {"genus2_smooth", "psef"},    {"double_fibres_3", "out-of-scope"}, {"double_fibres_4", "psef"},
      {"double_fibres_5", "psef"},  {"isotrivial_g1", "not-psef"}, {"isotrivial_g2", "not-psef"}};
  for (const auto& [name, verdict] : cases) {
    Outcome r = run("report --json " + sample("specs/" + name + ".json"));
    ASSERT_EQ(r.code, 0) << name;
    EXPECT_EQ(nlohmann::json::parse(r.out)["tangent_psef"], verdict) << name;
  }
}

TEST(Cli, OutputIsDeterministic) {
  for (std::string args : {"report --json " + sample("specs/isotrivial_g2.json"), std::string("verify-tables --json"),
                           std::string("blowup III*"), "psef-oracle " + sample("divisors/i0star_tails.json")}) {
    Outcome a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, InputErrorsExitTwo) {
  Outcome syntax = run("report " + sample("specs/bad_syntax.json"), true);
  EXPECT_EQ(syntax.code, 2);
  EXPECT_TRUE(contains(syntax.out, "E_SYNTAX at line 3, column 16"));
  Outcome euler = run("report " + sample("specs/bad_euler.json"), true);
  EXPECT_EQ(euler.code, 2);
  EXPECT_TRUE(contains(euler.out, "E_EULER"));
  EXPECT_EQ(run("report /nonexistent/spec.json").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("fibre V").code, 2);
  EXPECT_EQ(run("blowup 2I0").code, 2);
  EXPECT_EQ(run("blowup I3").code, 2);
  EXPECT_EQ(run("psef-oracle --backend lp " + sample("divisors/i0star_tails.json")).code, 2);
}

TEST(Cli, Help) { EXPECT_EQ(run("--help").code, 0); }

TEST(Cli, Fibre) {
  Outcome r = run("fibre II*");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "Euler number 10"));
  Outcome j = run("fibre --json I0*");
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out)["euler"], 6);
  EXPECT_TRUE(contains(run("fibre I3").out, "extrapolated"));
}

TEST(Cli, ZariskiAndOracle) {
  Outcome z = run("zariski --json " + sample("divisors/double_fibre_plus_central.json"));
  ASSERT_EQ(z.code, 0);
  auto j = nlohmann::json::parse(z.out);
  EXPECT_EQ(j["negative"]["c2:e1"], "1");
  Outcome bad = run("zariski " + sample("divisors/i0star_tails.json"), true);
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(contains(bad.out, "not pseudo-effective"));

  for (std::string backend : {"fm", "simplex"}) {
    Outcome psef = run("psef-oracle --backend " + backend + " " + sample("divisors/i0star_central.json"));
    EXPECT_EQ(psef.code, 0);
    EXPECT_TRUE(contains(psef.out, "pseudo-effective\nwitness"));
    Outcome not_psef = run("psef-oracle --json --backend " + backend + " " + sample("divisors/i0star_tails.json"));
    ASSERT_EQ(not_psef.code, 0);
    auto k = nlohmann::json::parse(not_psef.out);
    EXPECT_EQ(k["psef"], false);
    EXPECT_EQ(k["criterion"]["verdict"], "fires");
  }
}

TEST(Cli, Blowup) {
  Outcome r = run("blowup --json II*");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["witness"][0], "Y_{5,6}");
  EXPECT_EQ(j["witness"][1], "1/6");
  EXPECT_EQ(j["exceptional"]["Y_{1,2}"], "3/2");
  Outcome ii = run("blowup --json II");
  auto k = nlohmann::json::parse(ii.out);
  EXPECT_EQ(k["exceptional"]["Y_1"], "1/3");
  EXPECT_EQ(k["exceptional_oracle"]["Y_1"], "1/4");
}

TEST(Cli, VerifyTables) {
  Outcome clean = run("verify-tables");
  EXPECT_EQ(clean.code, 0);
  EXPECT_TRUE(contains(clean.out, "0 failed, 2 for review"));
  Outcome j = run("verify-tables --json");
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out)["fail"], 0);

  for (std::string fault : {"euler/II*=9", "normalised/II*/e6=1/12", "pullback/IV/Y_{1,2,3}=1/3", "gamma/II=x^3,y"}) {
    Outcome r = run("verify-tables --perturb '" + fault + "'");
    EXPECT_EQ(r.code, 1) << fault;
    EXPECT_TRUE(contains(r.out, "FAIL")) << fault;
  }
  EXPECT_EQ(run("verify-tables --perturb 'euler/II*=9' --perturb 'bound/II*=5'").code, 1);
  EXPECT_EQ(run("verify-tables --perturb 'nothing=1'").code, 2);
}
