#include "chargeq/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "chargeq/entanglement.hpp"
#include "chargeq/errors.hpp"
#include "chargeq/format.hpp"

namespace chargeq {

namespace {

const std::set<std::string, std::less<>> kAxisNames = {"e_j", "e_j1", "e_j2", "t"};
const std::set<std::string, std::less<>> kFixedNames = {"e_j", "e_j1", "e_j2", "e_m", "t"};

unsigned worker_count(const SweepOptions& options, std::size_t jobs) {
  unsigned n = options.threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Evaluates fn(i) for i in [0, count); results are index-addressed by the caller.
void parallel_for(std::size_t count, const SweepOptions& options,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned workers = worker_count(options, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    constexpr std::size_t kChunk = 64;
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + kChunk);
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

struct PointParams {
  double e_j1 = 0;
  double e_j2 = 0;
  double e_m = 1;
  std::optional<double> t;
};

void assign(PointParams& p, std::string_view name, double value) {
  if (name == "e_j") {
    p.e_j1 = p.e_j2 = value;
  } else if (name == "e_j1") {
    p.e_j1 = value;
  } else if (name == "e_j2") {
    p.e_j2 = value;
  } else if (name == "e_m") {
    p.e_m = value;
  } else if (name == "t") {
    p.t = value;
  }
}

double evaluate(const PointParams& p) {
  if (p.t) return thermal_concurrence(p.e_j1, p.e_j2, p.e_m, Temperature<double>(*p.t)).value();
  return ground_state_concurrence(p.e_j1, p.e_j2, p.e_m).value();
}

std::string join_values(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_number(values[i]);
  }
  return out;
}

std::string describe_fixed(const std::map<std::string, double>& fixed) {
  std::string out;
  for (const auto& [name, value] : fixed) {
    if (!out.empty()) out += ";";
    out += name + "=" + format_number(value);
  }
  return out;
}

std::string describe_axes(const std::vector<Axis>& axes) {
  std::string out;
  for (const auto& axis : axes) {
    if (!out.empty()) out += ";";
    out += axis.describe();
  }
  return out;
}

}  // namespace

Axis Axis::linspace(std::string name, double start, double stop, int count) {
  if (count < 2) throw ContractViolation("axis " + name + ": count must be >= 2");
  if (!(start < stop) || !std::isfinite(start) || !std::isfinite(stop))
    throw ContractViolation("axis " + name + ": start must be < stop");
  Axis axis;
  axis.name = std::move(name);
  axis.linear = true;
  axis.values.resize(static_cast<std::size_t>(count));
  const double span = stop - start;
  for (int i = 0; i < count; ++i)
    axis.values[static_cast<std::size_t>(i)] = start + span * (double(i) / double(count - 1));
  axis.values.back() = stop;
  return axis;
}

Axis Axis::list(std::string name, std::vector<double> values) {
  if (values.empty()) throw ContractViolation("axis " + name + ": no values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw ContractViolation("axis " + name + ": non-finite value");
    if (i > 0 && !(values[i - 1] < values[i]))
      throw ContractViolation("axis " + name + ": values must be strictly ascending");
  }
  Axis axis;
  axis.name = std::move(name);
  axis.values = std::move(values);
  return axis;
}

Axis Axis::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  for (std::size_t pos = 0;;) {
    const std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, colon - pos));
    pos = colon + 1;
  }
  if (parts.size() != 4)
    throw ContractViolation("axis '" + std::string(text) + "': expected name:start:stop:count");

  auto number = [&](std::string_view field) {
    double value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
      throw ContractViolation("axis '" + std::string(text) + "': bad number '" +
                              std::string(field) + "'");
    return value;
  };
  const double start = number(parts[1]);
  const double stop = number(parts[2]);
  int count = 0;
  const auto [ptr, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), count);
  if (ec != std::errc() || ptr != parts[3].data() + parts[3].size() || parts[3].empty())
    throw ContractViolation("axis '" + std::string(text) + "': bad count '" +
                            std::string(parts[3]) + "'");
  return linspace(std::string(parts[0]), start, stop, count);
}

std::string Axis::describe() const {
  if (linear) {
    return name + "=linspace(" + format_number(values.front()) + "," +
           format_number(values.back()) + "," + std::to_string(values.size()) + ")";
  }
  return name + "=list(" + join_values(values) + ")";
}

double Axis::step() const {
  if (values.size() < 2) return 0.0;
  if (linear) return (values.back() - values.front()) / double(values.size() - 1);
  double step = 0;
  for (std::size_t i = 1; i < values.size(); ++i) step = std::max(step, values[i] - values[i - 1]);
  return step;
}

void GridSpec::validate() const {
  if (axes.empty() || axes.size() > 2)
    throw ContractViolation("grid must have 1 or 2 axes, got " + std::to_string(axes.size()));

  std::set<std::string, std::less<>> seen;
  for (const auto& axis : axes) {
    if (!kAxisNames.contains(axis.name))
      throw ContractViolation("invalid axis name '" + axis.name +
                              "' (expected one of e_j, e_j1, e_j2, t)");
    if (axis.values.empty()) throw ContractViolation("axis " + axis.name + " has no values");
    if (!seen.insert(axis.name).second)
      throw ContractViolation("axis '" + axis.name + "' declared twice");
    if (axis.name == "t" && !(axis.values.front() > 0.0))
      throw DomainError("t axis must be strictly positive");
  }
  for (const auto& [name, value] : fixed) {
    if (!kFixedNames.contains(name))
      throw ContractViolation("invalid fixed parameter '" + name + "'");
    if (!std::isfinite(value)) throw DomainError("fixed parameter '" + name + "' is not finite");
    if (!seen.insert(name).second)
      throw ContractViolation("parameter '" + name + "' is both an axis and fixed");
  }
  if (seen.contains("e_j") && (seen.contains("e_j1") || seen.contains("e_j2")))
    throw ContractViolation("e_j cannot be combined with e_j1 or e_j2");
  if (!seen.contains("e_j") && !(seen.contains("e_j1") && seen.contains("e_j2")))
    throw ContractViolation("Josephson energies not set: give e_j, or both e_j1 and e_j2");
  if (auto it = fixed.find("t"); it != fixed.end() && !(it->second > 0.0))
    throw DomainError("fixed t must be > 0");
  if (auto it = fixed.find("e_m"); it != fixed.end() && !(it->second > 0.0))
    throw DomainError("e_m must be > 0");
}

std::size_t GridSpec::point_count() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

SweepOptions SweepOptions::from_environment() {
  SweepOptions options;
  if (const char* env = std::getenv("QUBIT_SWEEP_THREADS"); env && *env) {
    unsigned value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value > 0)
      options.threads = value;
  }
  return options;
}

const std::string* FigureDataset::find_metadata(std::string_view key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

FigureDataset run_sweep(const GridSpec& spec, const SweepOptions& options) {
  spec.validate();

  PointParams base;
  for (const auto& [name, value] : spec.fixed) assign(base, name, value);

  const std::size_t total = spec.point_count();
  FigureDataset out;
  out.figure_id = "custom";
  for (const auto& axis : spec.axes) out.columns.push_back(axis.name);
  out.columns.emplace_back("c");
  out.rows.assign(total, {});

  parallel_for(total, options, [&](std::size_t index) {
    std::vector<double> row(spec.axes.size() + 1);
    PointParams p = base;
    std::size_t rest = index;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& values = spec.axes[a].values;
      row[a] = values[rest % values.size()];
      rest /= values.size();
      assign(p, spec.axes[a].name, row[a]);
    }
    row.back() = evaluate(p);
    out.rows[index] = std::move(row);
  });

  const bool has_t = spec.fixed.contains("t") ||
                     std::any_of(spec.axes.begin(), spec.axes.end(),
                                 [](const Axis& a) { return a.name == "t"; });
  out.metadata = {
      {"figure", out.figure_id},
      {"grid", describe_axes(spec.axes)},
      {"fixed", describe_fixed(spec.fixed)},
      {"t_mode", has_t ? "thermal" : "ground_state"},
      {"tool_version", std::string(kToolVersion)},
  };
  return out;
}

std::span<const std::string_view> figure_ids() {
  static constexpr std::array<std::string_view, 5> kIds = {"fig1", "fig2", "fig3", "fig4",
                                                           "fig5"};
  return kIds;
}

namespace {

constexpr double kFigureLowT = 0.01;
constexpr double kLiteralCaptionT = 20.0;

void finish_metadata(FigureDataset& ds, std::string_view id, std::string t_mode,
                     const FigureOverrides& overrides) {
  ds.figure_id = std::string(id);
  for (auto& [key, value] : ds.metadata) {
    if (key == "figure") value = ds.figure_id;
    if (key == "t_mode") value = t_mode;
  }
  if (overrides.physical_t_mk)
    ds.metadata.emplace_back("physical_t_mk", format_number(*overrides.physical_t_mk));
  if (auto warning = validity_warning(overrides.physical_t_mk))
    ds.metadata.emplace_back("warning", *warning);
}

double caption_temperature(const FigureOverrides& overrides, std::string& mode) {
  if (overrides.t) {
    mode = "override";
    return *overrides.t;
  }
  if (overrides.literal_temperature) {
    mode = "literal";
    return kLiteralCaptionT;
  }
  mode = "effective_zero";
  return kFigureLowT;
}

}  // namespace

FigureDataset figure_dataset(std::string_view figure_id, const FigureOverrides& overrides,
                             const SweepOptions& options) {
  if (figure_id == "fig1") {
    GridSpec spec{{Axis::list("t", {0.01, 0.5, 1.0, 2.0}), Axis::linspace("e_j", 0.0, 10.0, 501)},
                  {{"e_m", 1.0}}};
    auto ds = run_sweep(spec, options);
    ds.marker_columns = {"marker_e_j", "marker_c"};
    ds.markers = {{3.625, 0.27}};
    finish_metadata(ds, figure_id, "thermal", overrides);
    ds.metadata.emplace_back("markers", "experiment");
    return ds;
  }
  if (figure_id == "fig2") {
    GridSpec spec{{Axis::list("e_j", {0.5, 1.0, 2.0, 5.0}), Axis::linspace("t", 0.01, 19.99, 1000)},
                  {{"e_m", 1.0}}};
    auto ds = run_sweep(spec, options);
    finish_metadata(ds, figure_id, "thermal", overrides);
    return ds;
  }
  if (figure_id == "fig3") {
    GridSpec spec{{Axis::linspace("e_j1", 0.0, 30.0, 121), Axis::linspace("t", 0.01, 10.0, 100)},
                  {{"e_j2", 17.2}, {"e_m", 1.0}}};
    auto ds = run_sweep(spec, options);
    finish_metadata(ds, figure_id, "thermal", overrides);
    return ds;
  }
  if (figure_id == "fig4") {
    std::string mode;
    const double t = caption_temperature(overrides, mode);
    GridSpec spec{{Axis::linspace("e_j1", 0.5, 25.0, 99), Axis::linspace("e_j2", 0.5, 25.0, 99)},
                  {{"e_m", 1.0}, {"t", t}}};
    auto ds = run_sweep(spec, options);
    finish_metadata(ds, figure_id, mode, overrides);
    return ds;
  }
  if (figure_id == "fig5") {
    std::string mode;
    const double t = caption_temperature(overrides, mode);
    const Axis axis = Axis::linspace("e_j1", 0.0, 30.0, 601);
    auto equal = run_sweep(GridSpec{{Axis{"e_j", axis.values, true}}, {{"e_m", 1.0}, {"t", t}}},
                           options);
    auto fixed = run_sweep(
        GridSpec{{axis}, {{"e_j2", 17.2}, {"e_m", 1.0}, {"t", t}}}, options);
    FigureDataset ds;
    ds.columns = {"e_j1", "c_equal", "c_fixed"};
    ds.rows.reserve(axis.values.size());
    for (std::size_t i = 0; i < axis.values.size(); ++i)
      ds.rows.push_back({axis.values[i], equal.rows[i][1], fixed.rows[i][1]});
    ds.metadata = {
        {"figure", ""},
        {"grid", axis.describe()},
        {"fixed", "e_m=1;t=" + format_number(t)},
        {"families", "c_equal:e_j2=e_j1;c_fixed:e_j2=17.2"},
        {"t_mode", ""},
        {"tool_version", std::string(kToolVersion)},
    };
    finish_metadata(ds, figure_id, mode, overrides);
    return ds;
  }
  throw ContractViolation("unknown figure id '" + std::string(figure_id) +
                          "' (expected fig1..fig5)");
}

bool ExperimentPoint::passes() const {
  return computed_c >= 0.0 && computed_c <= 1.0 &&
         std::abs(computed_c - reported_theory_c) <= tolerance;
}

std::vector<ExperimentPoint> compare_experiments() {
  std::vector<ExperimentPoint> points = {
      {"identical", 3.625, 3.625, 1.0, 0.27, 0.26593, 0.0, 1e-4},
      {"distinct", 13.6, 17.2, 1.0, 0.06, 0.064, 0.0, 1e-3},
  };
  for (auto& p : points) p.computed_c = ground_state_concurrence(p.e_j1, p.e_j2, p.e_m).value();
  return points;
}

bool DiagonalCheckReport::all_within() const {
  return !entries.empty() && std::all_of(entries.begin(), entries.end(),
                                         [](const auto& e) { return e.within_one_step; });
}

DiagonalCheckReport argmax_diagonal_check(double t, std::span<const double> e_j2_values,
                                          const Axis& e_j1_grid, const SweepOptions& options) {
  const Temperature<double> temperature(t);
  DiagonalCheckReport report{t, e_j1_grid.step(), {}};
  const std::size_t n = e_j1_grid.values.size();
  for (const double e_j2 : e_j2_values) {
    std::vector<double> c(n);
    parallel_for(n, options, [&](std::size_t i) {
      c[i] = thermal_concurrence(e_j1_grid.values[i], e_j2, 1.0, temperature).value();
    });
    const std::size_t best =
        static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    DiagonalCheckEntry entry;
    entry.e_j2 = e_j2;
    entry.argmax_e_j1 = e_j1_grid.values[best];
    entry.c_max = c[best];
    entry.c_diagonal = thermal_concurrence(e_j2, e_j2, 1.0, temperature).value();
    entry.within_one_step =
        std::abs(entry.argmax_e_j1 - e_j2) <= report.grid_step * (1.0 + 1e-9);
    report.entries.push_back(entry);
  }
  return report;
}

std::optional<std::string> validity_warning(std::optional<double> t_physical_mk) {
  if (!t_physical_mk || *t_physical_mk <= kCriticalTemperatureMk) return std::nullopt;
  return "T = " + format_number(*t_physical_mk) +
         " mK is above the superconducting transition (T_C = 450 mK); results are not physical";
}

}  // namespace chargeq
