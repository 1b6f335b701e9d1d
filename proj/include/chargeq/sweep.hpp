#pragma once

// Deterministic parameter sweeps and the figure datasets built from them.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chargeq {

inline constexpr std::string_view kToolVersion = "chargeq 1.0.0";

/// Physical temperature (mK) above which the superconducting material is normal.
inline constexpr double kCriticalTemperatureMk = 450.0;

/// One grid axis. Names: e_j (sets both Josephson energies), e_j1, e_j2, t.
struct Axis {
  std::string name;
  std::vector<double> values;
  bool linear = false;

  /// Inclusive linear grid; requires count >= 2 and start < stop.
  static Axis linspace(std::string name, double start, double stop, int count);
  /// Explicit strictly ascending values.
  static Axis list(std::string name, std::vector<double> values);

  /// Parses "name:start:stop:count".
  static Axis parse(std::string_view text);

  std::string describe() const;
  double step() const;
};

/// Sweep definition: 1 or 2 axes plus fixed parameters (e_j, e_j1, e_j2, e_m, t).
/// Without any temperature the T -> 0 ground-state concurrence is evaluated.
struct GridSpec {
  std::vector<Axis> axes;
  std::map<std::string, double> fixed;

  /// Throws ContractViolation / DomainError describing the first problem found.
  void validate() const;
  std::size_t point_count() const;
};

struct SweepOptions {
  /// Worker count; 0 picks hardware concurrency. Never affects results.
  unsigned threads = 0;

  /// Reads QUBIT_SWEEP_THREADS as a cap on the worker count.
  static SweepOptions from_environment();
};

/// Tabular sweep output. Markers (e.g. experimental points) are a separate,
/// usually tiny, table that travels with the dataset.
struct FigureDataset {
  std::string figure_id;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> marker_columns;
  std::vector<std::vector<double>> markers;
  std::vector<std::pair<std::string, std::string>> metadata;

  const std::string* find_metadata(std::string_view key) const;
};

/// Row-major over axes in declared order; each row is the axis values followed by c.
FigureDataset run_sweep(const GridSpec& spec, const SweepOptions& options = {});

struct FigureOverrides {
  /// Replaces the fixed temperature of fig4/fig5 (default 0.01).
  std::optional<double> t;
  /// Evaluate fig4/fig5 at the literal caption temperature t = 20.
  bool literal_temperature = false;
  /// Physical temperature annotation in mK, only used for the validity warning.
  std::optional<double> physical_t_mk;
};

std::span<const std::string_view> figure_ids();

/// Default dataset for fig1..fig5. Throws ContractViolation for unknown ids.
FigureDataset figure_dataset(std::string_view figure_id, const FigureOverrides& overrides = {},
                             const SweepOptions& options = {});

struct ExperimentPoint {
  std::string label;
  double e_j1;
  double e_j2;
  double e_m;
  double reported_measured_c;
  double reported_theory_c;
  double computed_c;
  /// Acceptance band around reported_theory_c.
  double tolerance;

  bool passes() const;
};

/// The two device points with published measured and predicted concurrences.
std::vector<ExperimentPoint> compare_experiments();

struct DiagonalCheckEntry {
  double e_j2;
  double argmax_e_j1;
  double c_max;
  /// C at e_j1 = e_j2 (evaluated directly, not read off the grid).
  double c_diagonal;
  bool within_one_step;
};

struct DiagonalCheckReport {
  double t;
  double grid_step;
  std::vector<DiagonalCheckEntry> entries;

  bool all_within() const;
};

/// For each e_j2, locates argmax over e_j1_grid of the thermal concurrence and
/// reports whether it lies within one grid step of e_j1 = e_j2.
DiagonalCheckReport argmax_diagonal_check(double t, std::span<const double> e_j2_values,
                                          const Axis& e_j1_grid,
                                          const SweepOptions& options = {});

/// Warning text when a physical temperature annotation exceeds the critical temperature.
std::optional<std::string> validity_warning(std::optional<double> t_physical_mk);

}  // namespace chargeq
