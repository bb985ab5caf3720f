#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string data(const char* name) { return std::string(MOMENTDECOMP_TEST_DATA) + "/" + name; }

RunResult run(const std::string& args, const std::string& stdin_file = "") {
  std::string cmd = std::string(MDECOMP_PATH) + " " + args;
  if (!stdin_file.empty()) cmd += " < '" + stdin_file + "'";
  cmd += " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Whitespace-separated cells of the first output line starting with `label`.
std::vector<std::string> cells_of(const std::string& out, const std::string& label) {
  std::istringstream lines(out);
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind(label + " ", 0) != 0) continue;
    std::istringstream in(line);
    std::vector<std::string> cells;
    for (std::string c; in >> c;) cells.push_back(c);
    return cells;
  }
  return {};
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

TEST(Cli, PoolsFixtureTable) {
  const auto r = run("'" + data("three_subgroups.csv") + "'");
  ASSERT_EQ(r.exit_code, 0);
  const auto cells = cells_of(r.out, "--pooled--");
  ASSERT_EQ(cells.size(), 6u) << r.out;
  EXPECT_EQ(cells[1], "123");
  EXPECT_EQ(cells[2], "0.11209600");
  EXPECT_EQ(cells[3], "0.7743711");
  EXPECT_EQ(cells[5], "2.951960");
}

TEST(Cli, RecoversOtherRow) {
  const auto r = run("--pooled 3 '" + data("missing_subgroup.csv") + "'");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("--other--"), std::string::npos) << r.out;
}

TEST(Cli, ReadsStdin) {
  const auto r = run("--format csv", data("three_subgroups.csv"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.rfind("name,n,mean,var,skew,kurt\n", 0), 0u) << r.out;
}

TEST(Cli, MalformedCsvExitsTwo) {
  const auto path = write_temp("bad.csv", "n,mean,var\n10,1.5,oops\n");
  EXPECT_EQ(run("'" + path + "'").exit_code, 2);
  EXPECT_EQ(run("/nonexistent/file.csv").exit_code, 2);
  EXPECT_EQ(run("--format yaml x.csv").exit_code, 2);
}

TEST(Cli, InconsistentSubtractionExitsOne) {
  const auto path = write_temp("wide.csv", "n,mean,var\n10,0,50\n20,0,1\n");
  EXPECT_EQ(run("--pooled 2 '" + path + "'").exit_code, 1);
  EXPECT_EQ(run("--pooled 9 '" + data("three_subgroups.csv") + "'").exit_code, 1);
}

TEST(Cli, ValidateReportsViolations) {
  const auto path = write_temp("chain.csv", "name,n,mean,var\na,10,0,1\nb,5,1,2\n");
  EXPECT_EQ(run("--validate '" + path + "'").exit_code, 0);
  const auto r = run("--validate --pooled 7 '" + path + "'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("out of range"), std::string::npos) << r.out;
}

TEST(Cli, RawMode) {
  const auto a = write_temp("a.txt", "1\n3\n5\n");
  const auto b = write_temp("b.txt", "2 4\n");
  auto r = run("--raw '" + a + "'");
  ASSERT_EQ(r.exit_code, 0);
  const std::vector<std::string> row{"1", "3", "3", "4", "0", "1.5"};
  EXPECT_EQ(cells_of(r.out, "1"), row) << r.out;
  r = run("--raw --dump-sums --max-order 5 '" + a + "' '" + b + "'");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("--pooled--"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("SP5="), std::string::npos) << r.out;
  const auto bad = write_temp("bad.txt", "1\nfoo\n");
  EXPECT_EQ(run("--raw '" + bad + "'").exit_code, 2);
}

TEST(Cli, ConventionFlags) {
  const auto path = write_temp("c.csv", "n,mean,var,skew,kurt\n30,0,1,0.2,3.5\n40,1,2,-0.1,2.8\n");
  const auto raw = run("--format csv '" + path + "'");
  const auto sas = run("--skew-type sas --kurt-type SAS --format csv '" + path + "'");
  const auto excess = run("--kurt-excess --format csv '" + path + "'");
  EXPECT_EQ(raw.exit_code, 0);
  EXPECT_EQ(sas.exit_code, 0);
  EXPECT_EQ(excess.exit_code, 0);
  EXPECT_NE(raw.out, sas.out);
  EXPECT_NE(raw.out, excess.out);
  EXPECT_EQ(run("--skew-type nonsense '" + path + "'").exit_code, 1);
}

}  // namespace
