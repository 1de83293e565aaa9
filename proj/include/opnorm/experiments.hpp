#pragma once

// Reproducible experiment harness. Each experiment writes per-run trace CSVs
// and a `<name>_summary.csv` into the output directory and prints a short
// console summary. Outputs depend only on the options (byte-identical for
// identical options on one build).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opnorm {

inline constexpr std::string_view kExperimentNames[] = {"rotation-table", "shear2x2",     "disk-diag",
                                                         "row-vector",     "gaussian-grid", "projector-demo"};

struct ExperimentSpec {
  std::string name;
  int runs = 0;  // 0 selects the experiment's default
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  std::optional<std::size_t> max_iters;  // overrides the per-experiment budget
  std::optional<double> eps;
  std::optional<std::size_t> n;       // grid size (rotation-table, projector-demo)
  std::optional<std::size_t> angles;  // projector angles

  /// Throws InvalidInput for an unknown name or runs < 0.
  void validate() const;
};

struct ExperimentOutcome {
  std::filesystem::path summary;
  std::vector<std::filesystem::path> files;
  /// The experiment's own qualitative check (e.g. every bound satisfied).
  bool checks_passed = true;
};

ExperimentOutcome run_experiment(const ExperimentSpec& spec, std::ostream& console);

}  // namespace opnorm
