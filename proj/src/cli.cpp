#include "chargeq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chargeq/dataset_io.hpp"
#include "chargeq/entanglement.hpp"
#include "chargeq/errors.hpp"
#include "chargeq/format.hpp"
#include "chargeq/sweep.hpp"
#include "chargeq/thermal.hpp"

namespace chargeq {

namespace {

struct CliConfig {
  std::optional<double> e_j;
  std::optional<double> e_j1;
  std::optional<double> e_j2;
  double e_m = 1.0;
  std::optional<double> t;
  double n_g1 = 0.5;
  double n_g2 = 0.5;
  double e_c1 = 0.0;
  double e_c2 = 0.0;
  std::string format = "csv";
  std::string out_path;
  bool check = false;
  std::vector<std::string> axes;
  std::vector<std::string> only;
  std::string out_dir = ".";
  bool literal_t = false;
  std::optional<double> physical_t_mk;
};

const CLI::Validator kFinite(
    [](std::string& text) -> std::string {
      double value = 0;
      if (!CLI::detail::lexical_cast(text, value) || !std::isfinite(value))
        return "value must be a finite decimal number: " + text;
      return {};
    },
    "FINITE");

void add_josephson(CLI::App* cmd, CliConfig& cfg) {
  auto* ej = cmd->add_option("--ej", cfg.e_j, "Josephson energy of both (identical) qubits")
                 ->check(kFinite);
  auto* ej1 = cmd->add_option("--ej1", cfg.e_j1, "Josephson energy of qubit 1")->check(kFinite);
  auto* ej2 = cmd->add_option("--ej2", cfg.e_j2, "Josephson energy of qubit 2")->check(kFinite);
  ej->excludes(ej1)->excludes(ej2);
}

void add_common(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--em", cfg.e_m, "mutual coupling energy (energy unit)")->capture_default_str()->check(kFinite);
  cmd->add_option("--t", cfg.t, "temperature in units of E_m/k; omit for the T->0 limit")
      ->check(kFinite);
  cmd->add_option("--format", cfg.format, "output format")->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", cfg.out_path, "output file (default stdout)");
}

void add_device(CLI::App* cmd, CliConfig& cfg) {
  add_josephson(cmd, cfg);
  add_common(cmd, cfg);
  cmd->add_option("--ng1", cfg.n_g1, "gate charge of qubit 1")->capture_default_str()->check(kFinite);
  cmd->add_option("--ng2", cfg.n_g2, "gate charge of qubit 2")->capture_default_str()->check(kFinite);
  cmd->add_option("--ec1", cfg.e_c1, "charging energy of qubit 1 (only off n_g = 0.5)")->capture_default_str()
      ->check(kFinite);
  cmd->add_option("--ec2", cfg.e_c2, "charging energy of qubit 2 (only off n_g = 0.5)")->capture_default_str()
      ->check(kFinite);
}

QubitParams<double> device_params(const CliConfig& cfg) {
  QubitParams<double> p;
  if (cfg.e_j) {
    p.e_j1 = p.e_j2 = *cfg.e_j;
  } else {
    if (!cfg.e_j1 || !cfg.e_j2)
      throw ContractViolation("Josephson energies required: --ej, or both --ej1 and --ej2");
    p.e_j1 = *cfg.e_j1;
    p.e_j2 = *cfg.e_j2;
  }
  p.e_m = cfg.e_m;
  p.n_g1 = cfg.n_g1;
  p.n_g2 = cfg.n_g2;
  p.e_c1 = cfg.e_c1;
  p.e_c2 = cfg.e_c2;
  p.validate();
  return p;
}

bool at_degeneracy_point(const QubitParams<double>& p) { return p.n_g1 == 0.5 && p.n_g2 == 0.5; }

ThermalState<double> device_state(const QubitParams<double>& p, std::optional<double> t) {
  if (at_degeneracy_point(p)) {
    if (t) return gibbs_state(build_degenerate_hamiltonian(p.e_j1, p.e_j2, p.e_m), Temperature(*t));
    return zero_temperature_state(p.e_j1, p.e_j2, p.e_m);
  }
  const Matrix4d h = build_full_hamiltonian(p);
  if (t) return gibbs_state(h, Temperature(*t));
  return ground_projector(h, 1e-9 * std::max(1.0, max_abs(h)));
}

void emit(const CliConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    write_file(cfg.out_path, text);
  }
}

int cmd_concurrence(const CliConfig& cfg, std::ostream& out) {
  const auto p = device_params(cfg);
  const double c = wootters_concurrence(device_state(p, cfg.t)).value();
  const std::string mode = cfg.t ? "thermal" : "ground_state";
  const double t = cfg.t.value_or(0.0);

  std::string text;
  if (cfg.format == "json") {
    nlohmann::ordered_json doc;
    doc["mode"] = mode;
    doc["inputs"] = {{"e_j1", p.e_j1}, {"e_j2", p.e_j2}, {"e_m", p.e_m}, {"n_g1", p.n_g1},
                     {"n_g2", p.n_g2}, {"e_c1", p.e_c1}, {"e_c2", p.e_c2}, {"t", t}};
    doc["c"] = format_number(c);
    text = doc.dump(1) + "\n";
  } else {
    text = "mode,e_j1,e_j2,e_m,n_g1,n_g2,e_c1,e_c2,t,c\n";
    text += mode;
    for (double v : {p.e_j1, p.e_j2, p.e_m, p.n_g1, p.n_g2, p.e_c1, p.e_c2, t, c})
      text += "," + format_number(v);
    text += "\n";
  }
  emit(cfg, text, out);
  return kExitOk;
}

int cmd_density(const CliConfig& cfg, std::ostream& out) {
  const auto p = device_params(cfg);
  if (cfg.check && !cfg.t) throw ContractViolation("--check needs --t (closed form is for T > 0)");
  if (cfg.check && !at_degeneracy_point(p))
    throw DomainError("--check: the closed form only exists at n_g1 = n_g2 = 0.5");

  const Matrix4d spectral = device_state(p, cfg.t).matrix();
  std::optional<Matrix4d> closed;
  if (cfg.check)
    closed = closed_form_density(p.e_j1, p.e_j2, p.e_m, Temperature(*cfg.t)).matrix();

  static constexpr const char* kKets[] = {"00", "01", "10", "11"};
  std::string text;
  if (cfg.format == "json") {
    auto rows = [](const Matrix4d& m) {
      auto j = nlohmann::ordered_json::array();
      for (int i = 0; i < 4; ++i) {
        auto r = nlohmann::ordered_json::array();
        for (int k = 0; k < 4; ++k) r.push_back(format_number(m(i, k)));
        j.push_back(r);
      }
      return j;
    };
    nlohmann::ordered_json doc;
    doc["basis"] = {"00", "01", "10", "11"};
    doc["t"] = cfg.t ? format_number(*cfg.t) : "0";
    doc["spectral"] = rows(spectral);
    if (closed) {
      doc["closed_form"] = rows(*closed);
      doc["max_abs_diff"] = format_number(max_abs(*closed - spectral));
    }
    text = doc.dump(1) + "\n";
  } else {
    text = "source,row,00,01,10,11\n";
    auto dump = [&](const char* source, const Matrix4d& m) {
      for (int i = 0; i < 4; ++i) {
        text += std::string(source) + "," + kKets[i];
        for (int k = 0; k < 4; ++k) text += "," + format_number(m(i, k));
        text += "\n";
      }
    };
    dump("spectral", spectral);
    if (closed) {
      dump("closed_form", *closed);
      text += "max_abs_diff," + format_number(max_abs(*closed - spectral)) + "\n";
    }
  }
  emit(cfg, text, out);
  return kExitOk;
}

int cmd_sweep(const CliConfig& cfg, std::ostream& out) {
  GridSpec spec;
  for (const auto& text : cfg.axes) spec.axes.push_back(Axis::parse(text));
  if (cfg.e_j) spec.fixed["e_j"] = *cfg.e_j;
  if (cfg.e_j1) spec.fixed["e_j1"] = *cfg.e_j1;
  if (cfg.e_j2) spec.fixed["e_j2"] = *cfg.e_j2;
  if (cfg.t) spec.fixed["t"] = *cfg.t;
  spec.fixed["e_m"] = cfg.e_m;
  const auto ds = run_sweep(spec, SweepOptions::from_environment());
  emit(cfg, serialize(ds, parse_output_format(cfg.format)), out);
  return kExitOk;
}

int cmd_figures(const CliConfig& cfg, std::ostream& out) {
  FigureOverrides overrides;
  overrides.t = cfg.t;
  overrides.literal_temperature = cfg.literal_t;
  overrides.physical_t_mk = cfg.physical_t_mk;
  const auto format = parse_output_format(cfg.format);
  const auto options = SweepOptions::from_environment();

  std::vector<std::string> ids = cfg.only;
  if (ids.empty())
    for (auto id : figure_ids()) ids.emplace_back(id);

  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& id : ids) {
    const auto ds = figure_dataset(id, overrides, options);
    const auto path = dir / (id + std::string(extension(format)));
    write_file(path, serialize(ds, format));
    out << path.string() << " " << ds.rows.size() << " rows\n";
  }
  return kExitOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  const auto points = compare_experiments();
  bool all = true;
  std::string text;
  if (cfg.format == "json") {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& p : points) {
      all = all && p.passes();
      rows.push_back({{"label", p.label},
                      {"e_j1", p.e_j1},
                      {"e_j2", p.e_j2},
                      {"e_m", p.e_m},
                      {"measured_c", p.reported_measured_c},
                      {"reported_c", p.reported_theory_c},
                      {"computed_c", format_number(p.computed_c)},
                      {"tolerance", p.tolerance},
                      {"status", p.passes() ? "PASS" : "FAIL"}});
    }
    text = rows.dump(1) + "\n";
  } else {
    text = "label,e_j1,e_j2,e_m,measured_c,reported_c,computed_c,tolerance,status\n";
    for (const auto& p : points) {
      all = all && p.passes();
      text += p.label;
      for (double v : {p.e_j1, p.e_j2, p.e_m, p.reported_measured_c, p.reported_theory_c,
                       p.computed_c, p.tolerance})
        text += "," + format_number(v);
      text += std::string(",") + (p.passes() ? "PASS" : "FAIL") + "\n";
    }
  }
  emit(cfg, text, out);
  return all ? kExitOk : kExitDomainError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Thermal and ground-state concurrence of two coupled charge qubits", "chargeq"};
  app.require_subcommand(1);

  auto* concurrence = app.add_subcommand("concurrence", "concurrence at one device point");
  add_device(concurrence, cfg);

  auto* density = app.add_subcommand("density", "dump the density matrix");
  add_device(density, cfg);
  density->add_flag("--check", cfg.check, "also print the closed form and the max difference");

  auto* sweep = app.add_subcommand("sweep", "concurrence over a 1-D or 2-D grid");
  add_josephson(sweep, cfg);
  add_common(sweep, cfg);
  sweep->add_option("--axis", cfg.axes, "name:start:stop:count (name in e_j,e_j1,e_j2,t)")
      ->required()
      ->expected(1, 2);

  auto* figures = app.add_subcommand("figures", "write the figure datasets");
  std::vector<std::string> ids;
  for (auto id : figure_ids()) ids.emplace_back(id);
  figures->add_option("--only", cfg.only, "restrict to these figure ids")
      ->check(CLI::IsMember(ids));
  figures->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
  figures->add_option("--format", cfg.format, "output format")->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  auto* literal =
      figures->add_flag("--literal-t", cfg.literal_t, "evaluate fig4/fig5 at t = 20 literally");
  figures->add_option("--t", cfg.t, "temperature for fig4/fig5")->check(kFinite)->excludes(literal);
  figures->add_option("--physical-t-mk", cfg.physical_t_mk,
                      "physical temperature annotation (mK), only checked against T_C")
      ->check(kFinite);

  auto* verify = app.add_subcommand("verify", "compare against the published device points");
  verify->add_option("--format", cfg.format, "output format")->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  verify->add_option("--out", cfg.out_path, "output file (default stdout)");

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*concurrence) return cmd_concurrence(cfg, out);
    if (*density) return cmd_density(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
    if (*figures) return cmd_figures(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace chargeq
