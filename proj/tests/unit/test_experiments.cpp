#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "opnorm/errors.hpp"
#include "opnorm/experiments.hpp"

using namespace opnorm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("opnorm_exp_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

}  // namespace

TEST(Experiments, ValidatesSpec) {
  ExperimentSpec spec;
  spec.name = "nope";
  EXPECT_THROW(spec.validate(), InvalidInput);
  spec.name = "shear2x2";
  spec.runs = -1;
  EXPECT_THROW(spec.validate(), InvalidInput);
}

TEST(Experiments, Shear2x2SolverOnePowerMany) {
  ExperimentSpec spec{"shear2x2", 10, 3, fresh_dir("shear")};
  std::ostringstream console;
  const auto out = run_experiment(spec, console);
  EXPECT_TRUE(out.checks_passed);
  const auto rows = read_csv(out.summary);
  ASSERT_EQ(rows.size(), 21u);
  const auto eps = column(rows[0], "epsilon");
  const auto solver = column(rows[0], "solver_iterations");
  const auto power = column(rows[0], "power_iterations");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r][solver], "1");
    if (std::stod(rows[r][eps]) == 1e-2) EXPECT_GE(std::stoi(rows[r][power]), 50);
  }
}

TEST(Experiments, DiskDiagPointsLieOnTheCircle) {
  ExperimentSpec spec{"disk-diag", 2, 1, fresh_dir("disk")};
  std::ostringstream console;
  const auto out = run_experiment(spec, console);
  EXPECT_TRUE(out.checks_passed);
  std::size_t points = 0;
  for (const auto& f : out.files) {
    const auto rows = read_csv(f);
    ASSERT_EQ(rows[0], (std::vector<std::string>{"k", "v1", "v2"}));
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const double v1 = std::stod(rows[r][1]), v2 = std::stod(rows[r][2]);
      EXPECT_NEAR(v1 * v1 + v2 * v2, 1.0, 1e-6);
      ++points;
    }
  }
  EXPECT_GT(points, 100u);
}

TEST(Experiments, GaussianGridBoundHoldsOnEveryRow) {
  ExperimentSpec spec{"gaussian-grid", 2, 5, fresh_dir("grid")};
  spec.max_iters = 400;
  std::ostringstream console;
  const auto out = run_experiment(spec, console);
  EXPECT_TRUE(out.checks_passed);
  for (const auto& f : out.files) {
    const auto rows = read_csv(f);
    const auto ms = column(rows[0], "min_a_sq");
    const auto bd = column(rows[0], "bound");
    for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_LE(std::stod(rows[r][ms]), std::stod(rows[r][bd]));
  }
}

TEST(Experiments, SummaryRowRecomputableFromTrace) {
  // rotation-table: the estimate equals sqrt of the last trace objective
  ExperimentSpec spec{"rotation-table", 0, 2, fresh_dir("rot")};
  spec.n = 9;
  spec.max_iters = 2000;
  std::ostringstream console;
  const auto out = run_experiment(spec, console);
  const auto summary = read_csv(out.summary);
  ASSERT_EQ(summary.size(), 10u);  // header + 3 angles x 3 kernels
  EXPECT_EQ(summary[0], (std::vector<std::string>{"n", "angle", "interp", "estimate", "oracle_sigma_max",
                                                  "oracle_method", "termination", "iterations"}));
  ASSERT_EQ(out.files.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    const auto trace = read_csv(out.files[i]);
    ASSERT_GT(trace.size(), 1u);
    EXPECT_EQ(std::stoul(summary[i + 1][7]), trace.size() - 1);
    EXPECT_NEAR(std::stod(summary[i + 1][3]), std::sqrt(std::stod(trace.back()[4])), 1e-12);
  }
  EXPECT_NE(console.str().find("spline"), std::string::npos);
}

TEST(Experiments, ByteIdenticalReruns) {
  for (const char* name : {"row-vector", "projector-demo"}) {
    ExperimentSpec a{name, 1, 11, fresh_dir(std::string(name) + "_a")};
    ExperimentSpec b{name, 1, 11, fresh_dir(std::string(name) + "_b")};
    a.max_iters = b.max_iters = 500;
    std::ostringstream c1, c2;
    const auto o1 = run_experiment(a, c1);
    const auto o2 = run_experiment(b, c2);
    ASSERT_EQ(o1.files.size(), o2.files.size());
    EXPECT_EQ(slurp(o1.summary), slurp(o2.summary)) << name;
    for (std::size_t i = 0; i < o1.files.size(); ++i) EXPECT_EQ(slurp(o1.files[i]), slurp(o2.files[i]));
  }
}

TEST(Experiments, ProjectorDemoReportsMismatch) {
  ExperimentSpec spec{"projector-demo", 1, 0, fresh_dir("proj")};
  std::ostringstream console;
  const auto out = run_experiment(spec, console);
  EXPECT_TRUE(out.checks_passed);
  const auto rows = read_csv(out.summary);
  ASSERT_EQ(rows.size(), 4u);
  const auto gap = column(rows[0], "adjointness_gap");
  EXPECT_LT(std::stod(rows[2][gap]), 1e-12);
  EXPECT_GT(std::stod(rows[3][gap]), 1e-2);
}
