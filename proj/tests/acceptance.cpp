// Acceptance gate: one [PASS]/[FAIL] line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only (exit status reflects it)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chargeq/cli.hpp"
#include "chargeq/entanglement.hpp"
#include "chargeq/format.hpp"
#include "chargeq/sweep.hpp"
#include "oracles.hpp"

using namespace chargeq;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string num(double v) { return format_number(v); }

// Shared random set for 5 and 6.
struct Sample {
  double e_j1, e_j2, e_m, t;
};

std::vector<Sample> random_samples(std::uint64_t seed, int count) {
  oracle::Random rng(seed);
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Sample s{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(0.1, 5), rng.uniform(0.01, 100)};
    if (i % 10 == 1) s.e_j2 = s.e_j1 + 1e-9;
    if (i % 10 == 2) s.e_j2 = s.e_j1 - 1e-9;
    if (i % 10 == 3) s.e_j2 = -s.e_j1 + 1e-9;
    out.push_back(s);
  }
  return out;
}

Outcome point_a() {
  const auto start = Clock::now();
  const double c = ground_state_concurrence(3.625, 3.625, 1.0).value();
  const double ms = elapsed_ms(start);
  return {std::abs(c - 0.26593) <= 1e-4 && ms < 1.0,
          "C(3.625, 3.625, 1) = " + num(c) + " (target 0.26593 +/- 1e-4), " + num(ms) + " ms"};
}

Outcome point_b() {
  const auto start = Clock::now();
  const double c = ground_state_concurrence(13.6, 17.2, 1.0).value();
  const double ms = elapsed_ms(start);
  return {std::abs(c - 0.064) <= 1e-3 && ms < 1.0,
          "C(13.6, 17.2, 1) = " + num(c) + " (target 0.064 +/- 1e-3), " + num(ms) + " ms"};
}

Outcome zero_coupling() {
  bool ok = true;
  std::string values;
  for (double t : {0.01, 1.0, 100.0}) {
    const double c = thermal_concurrence(0.0, 0.0, 1.0, Temperature<double>(t)).value();
    ok = ok && c == 0.0;
    values += " t=" + num(t) + ":" + num(c);
  }
  return {ok, "C at E_J1 = E_J2 = 0:" + values};
}

Outcome intercept() {
  const Vector4d psi4 = identical_eigensystem(0.5, 1.0).states.col(3);
  const double c = pure_state_concurrence(psi4).value();
  return {std::abs(c - 0.8944) <= 0.01, "C(psi4, E_J = 0.5) = " + num(c) + " (target 0.8944 +/- 0.01)"};
}

Outcome closed_form_equivalence() {
  const auto start = Clock::now();
  const auto samples = random_samples(20240501, 5000);
  double worst = 0;
  for (const auto& s : samples) {
    const Temperature<double> t(s.t);
    const Matrix4d closed = closed_form_density(s.e_j1, s.e_j2, s.e_m, t).matrix();
    const Matrix4d spectral =
        gibbs_state(build_degenerate_hamiltonian(s.e_j1, s.e_j2, s.e_m), t).matrix();
    worst = std::max(worst, max_abs(closed - spectral));
  }
  const double ms = elapsed_ms(start);
  return {worst <= 1e-10 && ms < 5000.0, std::to_string(samples.size()) +
                                             " samples, max |closed - spectral| = " + num(worst) +
                                             ", " + num(ms) + " ms"};
}

Outcome spectra() {
  const auto samples = random_samples(20240501, 5000);
  double worst_value = 0, worst_residual = 0;
  for (const auto& s : samples) {
    const Matrix4d h = build_degenerate_hamiltonian(s.e_j1, s.e_j2, s.e_m);
    const auto analytic = analytic_eigensystem(s.e_j1, s.e_j2, s.e_m);

    Vector4d expected;
    for (int k = 0; k < 4; ++k) expected(k) = analytic.energies[static_cast<std::size_t>(k)];
    std::sort(expected.data(), expected.data() + 4);
    const Vector4d values = jacobi_eigen(h).values;
    worst_value = std::max(worst_value, (values - expected).cwiseAbs().maxCoeff());

    for (int k = 0; k < 4; ++k) {
      const Vector4d v = analytic.states.col(k);
      const double e = analytic.energies[static_cast<std::size_t>(k)];
      worst_residual = std::max(worst_residual, (h * v - e * v).cwiseAbs().maxCoeff());
    }
  }
  return {worst_value <= 1e-12 && worst_residual <= 1e-12,
          std::to_string(samples.size()) + " samples (30% near-degenerate), max eigenvalue error " +
              num(worst_value) + ", max residual " + num(worst_residual)};
}

Outcome symmetries() {
  oracle::Random rng(8128);
  const int count = 2000;
  double exchange = 0, flip = 0, scaling = 0;
  for (int i = 0; i < count; ++i) {
    const double ej1 = rng.uniform(-20, 20), ej2 = rng.uniform(-20, 20), em = rng.uniform(0.1, 5);
    const double t = rng.uniform(0.01, 100);
    auto c = [&](double a, double b, double m, double temp) {
      return thermal_concurrence(a, b, m, Temperature<double>(temp)).value();
    };
    const double base = c(ej1, ej2, em, t);
    exchange = std::max(exchange, std::abs(c(ej2, ej1, em, t) - base));
    flip = std::max({flip, std::abs(c(-ej1, ej2, em, t) - base), std::abs(c(ej1, -ej2, em, t) - base),
                     std::abs(c(-ej1, -ej2, em, t) - base)});
    for (double s : {0.1, 3.0, 100.0})
      scaling = std::max(scaling, std::abs(c(s * ej1, s * ej2, s * em, s * t) - base));
  }
  return {exchange <= 1e-10 && flip <= 1e-10 && scaling <= 1e-10,
          std::to_string(count) + " samples, max deviation: exchange " + num(exchange) + ", sign flip " +
              num(flip) + ", scaling " + num(scaling)};
}

Outcome diagonal_maximum() {
  const auto grid = Axis::linspace("e_j1", 0.05, 25.0, 500);
  const std::vector<double> e_j2 = {2.0, 5.0, 10.0, 17.2};
  const auto report = argmax_diagonal_check(0.01, e_j2, grid);
  std::string detail = "t = 0.01, step " + num(report.grid_step) + ":";
  for (const auto& e : report.entries)
    detail += " e_j2=" + num(e.e_j2) + "->argmax " + num(e.argmax_e_j1) + " (C " + num(e.c_max) +
              " vs diagonal " + num(e.c_diagonal) + ")";
  return {report.all_within(), detail};
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    files[entry.path().filename().string()] = buffer.str();
  }
  return files;
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "chargeq_acceptance_determinism";
  std::filesystem::remove_all(root);
  const std::vector<std::pair<std::string, const char*>> runs = {
      {"first", nullptr}, {"second", nullptr}, {"one_thread", "1"}, {"three_threads", "3"}};

  std::vector<std::map<std::string, std::string>> trees;
  double slowest = 0;
  for (const auto& [name, threads] : runs) {
    if (threads) {
      ::setenv("QUBIT_SWEEP_THREADS", threads, 1);
    } else {
      ::unsetenv("QUBIT_SWEEP_THREADS");
    }
    std::ostringstream out, err;
    const auto start = Clock::now();
    const int code = run_cli({"chargeq", "figures", "--out-dir", (root / name).string()}, out, err);
    slowest = std::max(slowest, elapsed_ms(start));
    if (code != 0) return {false, "figures exited " + std::to_string(code) + ": " + err.str()};
    trees.push_back(read_tree(root / name));
  }
  ::unsetenv("QUBIT_SWEEP_THREADS");
  std::filesystem::remove_all(root);

  const bool identical =
      trees.front().size() == 5 &&
      std::all_of(trees.begin(), trees.end(), [&](const auto& t) { return t == trees.front(); });
  return {identical && slowest < 60000.0,
          std::to_string(runs.size()) + " runs (default, default, 1 and 3 threads), " +
              std::to_string(trees.front().size()) + " CSVs, " +
              (identical ? "byte-identical" : "DIFFERENT") + ", slowest " + num(slowest) + " ms"};
}

Outcome verify_command() {
  std::ostringstream out, err;
  const int code = run_cli({"chargeq", "verify"}, out, err);
  const std::string text = out.str();
  std::size_t passes = 0;
  for (std::size_t pos = 0; (pos = text.find(",PASS\n", pos)) != std::string::npos; ++pos) ++passes;
  return {code == 0 && passes == 2,
          "verify exit " + std::to_string(code) + ", " + std::to_string(passes) + "/2 rows PASS"};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "identical-qubit device point", point_a},
      {2, "distinct-qubit device point", point_b},
      {3, "zero Josephson coupling is separable", zero_coupling},
      {4, "ground-state concurrence at E_J = 0.5", intercept},
      {5, "closed-form density equals spectral Gibbs state", closed_form_equivalence},
      {6, "spectra and eigenvector residuals", spectra},
      {7, "exchange / sign / scaling invariance", symmetries},
      {8, "concurrence maximal on the diagonal E_J1 = E_J2", diagonal_maximum},
      {9, "figure generation is deterministic", determinism},
      {10, "verify subcommand", verify_command},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  for (const auto& c : criteria()) {
    if (only && c.id != only) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.title,
                outcome.detail.c_str());
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
