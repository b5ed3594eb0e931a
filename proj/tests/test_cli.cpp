#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("lls_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run lab(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string(LLS_LAB_EXE) + " " + args + " > " + out.string() + " 2> " +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Data rows of a CSV with '#' comments and one header line.
std::vector<std::vector<double>> rows(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> r;
    std::istringstream cells(line);
    std::string c;
    while (std::getline(cells, c, ',')) r.push_back(std::stod(c));
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(Cli, SampleIsDeterministic) {
  const auto a = scratch() / "a.csv", b = scratch() / "b.csv";
  ASSERT_EQ(lab("sample --beta 2 --n 16 --m 5 --seed 42 --out " + a.string()).code, 0);
  ASSERT_EQ(lab("sample --beta 2 --n 16 --m 5 --seed 42 --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto r = rows(slurp(a));
  EXPECT_EQ(r.size(), 80u);
  const auto other = lab("sample --beta 2 --n 16 --m 5 --seed 43");
  EXPECT_NE(other.out, slurp(a));
}

TEST(Cli, PoissonSampleIsSortedOnTheCircle) {
  const auto r = lab("sample --beta 0 --n 1024 --m 1 --seed 7");
  ASSERT_EQ(r.code, 0);
  const auto data = rows(r.out);
  ASSERT_EQ(data.size(), 1024u);
  for (std::size_t k = 0; k < data.size(); ++k) {
    EXPECT_EQ(data[k][1], static_cast<double>(k));
    EXPECT_GE(data[k][2], 0.0);
    EXPECT_LT(data[k][2], 2 * std::numbers::pi);
    if (k > 0) {
      EXPECT_GE(data[k][2], data[k - 1][2]);
    }
  }
}

TEST(Cli, CsvCarriesProvenanceHeader) {
  const auto r = lab("sample --beta 1 --n 8 --m 1 --seed 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# lls-lab 1.0.0\n# command sample\n# config {", 0), 0u);
  EXPECT_NE(r.out.find("\"seed\":3"), std::string::npos);
}

TEST(Cli, TheoryMeans) {
  const auto r = lab("theory --what means --beta 2 --lmax 4");
  ASSERT_EQ(r.code, 0);
  const auto d = rows(r.out);
  ASSERT_EQ(d.size(), 5u);
  EXPECT_NEAR(d[0][1], 1.17999, 1e-4);
  EXPECT_NEAR(d[1][1], 0.94449, 1e-4);
  EXPECT_EQ(rows(lab("theory --what means --beta 0 --lmax 2").out)[0][1], 2.0);
  EXPECT_EQ(lab("theory --what means --beta 1").code, 2);
}

TEST(Cli, TheoryDensitiesAndGap) {
  const auto p0 = rows(lab("theory --what p0 --beta 2 --smax 5 --step 0.01").out);
  ASSERT_GT(p0.size(), 400u);
  double mass = 0;
  for (std::size_t k = 1; k < p0.size(); ++k) mass += 0.5 * (p0[k][1] + p0[k - 1][1]) * (p0[k][0] - p0[k - 1][0]);
  EXPECT_NEAR(mass, 1.0, 1e-3);

  const auto gap = rows(lab("theory --what gap --beta 4 --smax 3 --step 0.05").out);
  ASSERT_EQ(gap.size(), 61u);
  EXPECT_DOUBLE_EQ(gap[0][1], 1.0);
  for (std::size_t k = 1; k < gap.size(); ++k) EXPECT_LE(gap[k][1], gap[k - 1][1]);

  const auto c = json::parse(lab("theory --what constants").out);
  EXPECT_EQ(c["command"], "theory");
  EXPECT_DOUBLE_EQ(c["means"]["2"][0].get<double>(), 1.17999);
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(lab("").code, 2);
  EXPECT_EQ(lab("frobnicate").code, 2);
  EXPECT_EQ(lab("sample --beta 3").code, 2);
  EXPECT_EQ(lab("sample --n notanumber").code, 2);
  EXPECT_EQ(lab("lls --source cue --protocol 2.1").code, 2);
  EXPECT_EQ(lab("lls --source marbles").code, 2);
  EXPECT_EQ(lab("theory --what nothing").code, 2);
  EXPECT_EQ(lab("sample --config /nonexistent/cfg").code, 2);
  EXPECT_EQ(lab("--help").code, 0);
}

TEST(Cli, LlsReportsVerdicts) {
  const auto r = lab("lls --source poisson --n 256 --m 20000 --seed 5 --tolerance 0.05");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["command"], "lls");
  EXPECT_EQ(j["config"]["source"], "poisson");
  EXPECT_NEAR(j["means"][0]["mean"].get<double>(), 2.0, 0.05);
  EXPECT_EQ(j["means"][0]["verdict"], "PASS");
  EXPECT_EQ(j["verdict"], "PASS");

  // An impossible tolerance makes the comparison fail with exit code 1.
  EXPECT_EQ(lab("lls --source cue --m 200 --seed 5 --tolerance 1e-9").code, 1);
}

TEST(Cli, LlsOnBundledZeros) {
  const auto r = lab("lls --source zeros --zeros " + std::string(LLS_DATA_DIR) + "/zeros_1e4.txt --q 1000 --tolerance 0.1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["means"][0]["mean"].get<double>(), 1.18, 0.05);
}

TEST(Cli, ConfigFileAndOverride) {
  const auto cfg = scratch() / "run.cfg";
  std::ofstream(cfg) << "# sampling setup\nbeta = 4\nn = 8\nm = 2\nseed = 11\n";
  const auto from_file = lab("sample --config " + cfg.string());
  ASSERT_EQ(from_file.code, 0);
  EXPECT_NE(from_file.out.find("\"beta\":4"), std::string::npos);
  EXPECT_EQ(rows(from_file.out).size(), 16u);
  EXPECT_EQ(from_file.out, lab("sample --beta 4 --n 8 --m 2 --seed 11").out);

  const auto overridden = lab("sample --config " + cfg.string() + " --seed 12");
  ASSERT_EQ(overridden.code, 0);
  EXPECT_NE(overridden.out.find("\"seed\":12"), std::string::npos);
  EXPECT_EQ(overridden.out, lab("sample --beta 4 --n 8 --m 2 --seed 12").out);

  std::ofstream(cfg) << "beta 4\n";
  EXPECT_EQ(lab("sample --config " + cfg.string()).code, 2);
}

TEST(Cli, ReportSubset) {
  const auto json_path = scratch() / "report.json";
  const auto r = lab("report --profile smoke --only 1 2 7 14 --json " + json_path.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS    [ 1]"), std::string::npos);
  EXPECT_NE(r.out.find("SKIPPED [14]"), std::string::npos);
  const auto j = json::parse(slurp(json_path));
  EXPECT_EQ(j["criteria"].size(), 4u);
  EXPECT_EQ(j["skipped"], 1);
  EXPECT_EQ(j["config"]["profile"], "smoke");
  EXPECT_EQ(j["exit_code"], 0);
}

TEST(Cli, ReportMissingZerosFileFails) {
  EXPECT_EQ(lab("report --profile smoke --only 14 --zeros /nonexistent/zeros.txt").code, 1);
  EXPECT_EQ(lab("report --profile huge").code, 2);
}
