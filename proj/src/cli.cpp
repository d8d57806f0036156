#include "steerlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "steerlab/criteria.hpp"
#include "steerlab/lhs_oracle.hpp"

namespace steerlab {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Overlays config-file values onto options the command line left untouched.
void overlay_config(const std::string& path, CLI::App* sub, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw std::invalid_argument("config: root must be an object");

  auto untouched = [&](const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + name);
    return opt != nullptr && opt->count() == 0 && doc.contains(name);
  };
  auto as_double = [&](const std::string& name) {
    if (!doc[name].is_number())
      throw std::invalid_argument("config: " + name + " must be a number");
    return doc[name].get<double>();
  };
  auto as_string = [&](const std::string& name) {
    if (!doc[name].is_string())
      throw std::invalid_argument("config: " + name + " must be a string");
    return doc[name].get<std::string>();
  };

  if (untouched("state")) cfg.state = as_string("state");
  if (untouched("family")) cfg.family = as_string("family");
  if (untouched("criteria")) {
    if (doc["criteria"].is_string()) {
      cfg.criteria = split_csv_list(doc["criteria"].get<std::string>());
    } else if (doc["criteria"].is_array()) {
      cfg.criteria.clear();
      for (const auto& item : doc["criteria"])
        cfg.criteria.push_back(item.get<std::string>());
    } else {
      throw std::invalid_argument("config: criteria must be a string or array");
    }
  }
  if (untouched("from")) cfg.from = as_double("from");
  if (untouched("to")) cfg.to = as_double("to");
  if (untouched("step")) cfg.step = as_double("step");
  if (untouched("grid-n")) cfg.grid_n = static_cast<int>(as_double("grid-n"));
  if (untouched("box-halfwidth")) cfg.box_halfwidth = as_double("box-halfwidth");
  if (untouched("provenance")) cfg.provenance = as_string("provenance");
  if (untouched("out")) cfg.out = as_string("out");
  if (untouched("format")) cfg.format = as_string("format");
  if (untouched("plot-dir")) cfg.plot_dir = as_string("plot-dir");
  if (untouched("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (untouched("samples")) cfg.samples = doc["samples"].get<std::uint64_t>();
  if (untouched("domain")) cfg.domain = as_string("domain");
}

void validate_common(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json")
    throw std::invalid_argument("format must be csv or json");
  if (cfg.grid_n && (*cfg.grid_n < 33 || *cfg.grid_n % 2 == 0))
    throw std::invalid_argument("grid-n must be odd and at least 33");
  if (cfg.box_halfwidth && !(*cfg.box_halfwidth > 0.0))
    throw std::invalid_argument("box-halfwidth must be positive");
  if (!cfg.provenance.empty() && cfg.provenance != "analytic" &&
      cfg.provenance != "quadrature")
    throw std::invalid_argument("provenance must be analytic or quadrature");
}

CriterionOptions criterion_options(const RunConfig& cfg, Provenance fallback) {
  CriterionOptions opts;
  opts.provenance = cfg.provenance.empty()
                        ? fallback
                        : (cfg.provenance == "analytic" ? Provenance::analytic
                                                        : Provenance::quadrature);
  opts.half_width = cfg.box_halfwidth;
  opts.grid_points = cfg.grid_n;
  return opts;
}

std::vector<Criterion> resolve_criteria(const std::string& family,
                                        const std::vector<std::string>& names) {
  const std::vector<Criterion> supported = supported_criteria(family);
  if (names.empty()) return supported;
  std::vector<Criterion> out;
  for (const std::string& name : names) {
    const Criterion c = parse_criterion(name);
    bool ok = false;
    for (Criterion s : supported) ok = ok || s == c;
    if (!ok)
      throw std::invalid_argument("criterion " + name + " is not defined for " +
                                  family);
    out.push_back(c);
  }
  return out;
}

json row_to_json(const SweepRow& row) {
  json j;
  j["family"] = row.family;
  j["param"] = row.param;
  j["criterion"] = criterion_name(row.verdict.criterion);
  if (row.failed) {
    j["lhs"] = nullptr;
    j["rhs"] = nullptr;
    j["ratio"] = nullptr;
    j["steerable"] = nullptr;
    j["error"] = row.error;
  } else {
    j["lhs"] = row.verdict.lhs;
    j["rhs"] = row.verdict.rhs;
    j["ratio"] = row.verdict.ratio;
    j["steerable"] = row.verdict.steerable;
    j["provenance"] =
        row.verdict.provenance == Provenance::analytic ? "analytic" : "quadrature";
    j["clamped_mass"] = row.verdict.diagnostics.clamped_mass;
    j["grid_n"] = row.verdict.diagnostics.grid_points;
    j["box_halfwidth"] = row.verdict.diagnostics.box_halfwidth;
  }
  return j;
}

std::string render_rows(const std::vector<SweepRow>& rows, const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const SweepRow& row : rows) arr.push_back(row_to_json(row));
    return arr.dump(2) + "\n";
  }
  std::string out = csv_header();
  for (const SweepRow& row : rows) out += csv_row(row);
  return out;
}

// Output file handling: the stream opens before any computation so a bad
// path fails as a usage error, never after minutes of quadrature.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) : path_(path) {
    if (path_.empty()) return;
    stream_.open(path_);
    if (!stream_) throw std::invalid_argument("out: cannot open " + path_);
  }

  void write(const std::string& text) {
    if (path_.empty()) {
      std::cout << text;
      std::cout.flush();
    } else {
      stream_ << text;
      stream_.flush();
    }
  }

 private:
  std::string path_;
  std::ofstream stream_;
};

void write_plots(const std::string& dir, const std::string& family,
                 const std::vector<SweepRow>& rows) {
  namespace fs = std::filesystem;
  std::map<std::string, std::string> per_criterion;
  for (const SweepRow& row : rows) {
    if (row.failed) continue;
    per_criterion[criterion_name(row.verdict.criterion)] +=
        format_double(row.param) + " " + format_double(row.verdict.ratio) + "\n";
  }
  for (const auto& [name, body] : per_criterion) {
    const fs::path path = fs::path(dir) / (family + "_" + name + ".dat");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("plot-dir: cannot write " + path.string());
    out << "# param ratio\n" << body;
  }
}

int finish_rows(const RunConfig& cfg, const std::vector<SweepRow>& rows,
                OutputTarget& target, const std::string& family) {
  target.write(render_rows(rows, cfg.format));
  if (!cfg.plot_dir.empty()) write_plots(cfg.plot_dir, family, rows);
  for (const SweepRow& row : rows)
    if (row.failed) {
      std::cerr << "steerlab: " << row.error << "\n";
      return 3;
    }
  return 0;
}

int run_verdict(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.state.empty()) throw std::invalid_argument("verdict needs --state");
  const FamilyTarget target = parse_family_target(cfg.state);
  const std::vector<Criterion> criteria =
      resolve_criteria(target.family, cfg.criteria);
  const CriterionOptions opts = criterion_options(cfg, Provenance::quadrature);

  OutputTarget out(cfg.out);
  std::vector<SweepRow> rows;
  for (Criterion c : criteria) {
    SweepRow row{target.family, target.param, SteeringVerdict{}, false, ""};
    row.verdict.criterion = c;
    try {
      row.verdict = evaluate(target, c, opts);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = std::string("verdict ") + criterion_name(c) + " on " +
                  cfg.state + ": " + e.what();
      const double nan = std::nan("");
      row.verdict.lhs = row.verdict.rhs = row.verdict.ratio = nan;
    }
    rows.push_back(std::move(row));
  }
  return finish_rows(cfg, rows, out, target.family);
}

std::vector<double> range_params(const RunConfig& cfg) {
  if (!cfg.have_range)
    throw std::invalid_argument("sweep needs --from, --to and --step");
  if (!(cfg.step > 0.0)) throw std::invalid_argument("step must be positive");
  if (cfg.to < cfg.from - 1e-12)
    throw std::invalid_argument("to must not be below from");
  const double span = (cfg.to - cfg.from) / cfg.step;
  if (span > 100000.0) throw std::invalid_argument("range produces too many points");
  const int count = static_cast<int>(std::floor(span + 1e-9)) + 1;
  std::vector<double> params(count);
  for (int k = 0; k < count; ++k) params[k] = cfg.from + k * cfg.step;
  return params;
}

int run_sweep(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.family.empty()) throw std::invalid_argument("sweep needs --family");
  const std::vector<double> params = range_params(cfg);
  const std::vector<Criterion> criteria = resolve_criteria(cfg.family, cfg.criteria);
  const CriterionOptions opts = criterion_options(cfg, Provenance::analytic);
  if (!cfg.plot_dir.empty()) {
    std::filesystem::create_directories(cfg.plot_dir);
    if (!std::filesystem::is_directory(cfg.plot_dir))
      throw std::invalid_argument("plot-dir: cannot create " + cfg.plot_dir);
  }

  OutputTarget out(cfg.out);
  const std::vector<SweepRow> rows = sweep(cfg.family, params, criteria, opts);
  return finish_rows(cfg, rows, out, cfg.family);
}

int run_table(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.family != "psub" && cfg.family != "lg")
    throw std::invalid_argument("table supports --family psub or lg");
  std::vector<double> params;
  if (cfg.family == "psub")
    for (int k = 0; k <= 6; ++k) params.push_back(0.1 * k);
  else
    for (int n = 0; n <= 5; ++n) params.push_back(n);
  const std::vector<Criterion> criteria = resolve_criteria(cfg.family, cfg.criteria);

  // Published-table runs always integrate; the analytic path is the oracle
  // the quadrature numbers get compared against, not the product.
  CriterionOptions opts = criterion_options(cfg, Provenance::quadrature);
  opts.provenance = Provenance::quadrature;
  if (!cfg.plot_dir.empty()) {
    std::filesystem::create_directories(cfg.plot_dir);
    if (!std::filesystem::is_directory(cfg.plot_dir))
      throw std::invalid_argument("plot-dir: cannot create " + cfg.plot_dir);
  }

  OutputTarget out(cfg.out);
  const std::vector<SweepRow> rows = sweep(cfg.family, params, criteria, opts);
  return finish_rows(cfg, rows, out, cfg.family);
}

int run_certify(const RunConfig& cfg) {
  if (cfg.domain != "gaussian" && cfg.domain != "qubit" && cfg.domain != "both")
    throw std::invalid_argument("domain must be gaussian, qubit or both");
  if (cfg.samples == 0) throw std::invalid_argument("samples must be positive");

  std::vector<LhsDomain> domains;
  if (cfg.domain != "qubit") domains.push_back(LhsDomain::gaussian);
  if (cfg.domain != "gaussian") domains.push_back(LhsDomain::qubit);

  OutputTarget out(cfg.out);
  json doc;
  doc["seed"] = cfg.seed;
  doc["samples"] = cfg.samples;
  doc["domains"] = json::array();
  std::uint64_t violations = 0;
  for (LhsDomain domain : domains) {
    const CertificationReport report =
        certify_no_violation(domain, cfg.samples, cfg.seed);
    violations += report.violations;
    json j;
    j["domain"] = report.domain;
    j["samples"] = report.samples;
    j["violations"] = report.violations;
    j["min_slack"] = report.min_slack;
    j["min_convexity_slack"] = report.min_convexity_slack;
    j["min_triangle_slack"] = report.min_triangle_slack;
    doc["domains"].push_back(j);
  }
  doc["ok"] = violations == 0;
  out.write(doc.dump(2) + "\n");
  if (violations > 0) {
    std::cerr << "steerlab: certification found " << violations
              << " bound violations\n";
    return 3;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string config_path;

  CLI::App app{"steerability criteria for two-mode and two-qubit states"};
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", config_path,
                    "JSON config; command-line flags take precedence");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid-n", cfg.grid_n, "points per axis, odd, >= 33");
    sub->add_option("--box-halfwidth", cfg.box_halfwidth,
                    "integration half-width per axis");
  };

  CLI::App* verdict = app.add_subcommand(
      "verdict", "evaluate criteria on one state, e.g. tmsv:r=0.5");
  verdict->add_option("--state", cfg.state, "state descriptor");
  verdict->add_option("--criteria", cfg.criteria,
                      "comma or space separated: reid entropic sum")
      ->delimiter(',');
  verdict->add_option("--provenance", cfg.provenance,
                      "analytic or quadrature (default quadrature)");
  add_grid(verdict);
  add_output(verdict);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run criteria over a parameter range");
  sweep_cmd->add_option("--family", cfg.family, "tmsv, psub, lg or werner");
  CLI::Option* opt_from = sweep_cmd->add_option("--from", cfg.from, "range start");
  CLI::Option* opt_to = sweep_cmd->add_option("--to", cfg.to, "range end");
  CLI::Option* opt_step = sweep_cmd->add_option("--step", cfg.step, "range step");
  sweep_cmd->add_option("--criteria", cfg.criteria, "subset of the family default")
      ->delimiter(',');
  sweep_cmd->add_option("--provenance", cfg.provenance,
                        "analytic or quadrature (default analytic)");
  sweep_cmd->add_option("--plot-dir", cfg.plot_dir,
                        "directory for <family>_<criterion>.dat ratio curves");
  add_grid(sweep_cmd);
  add_output(sweep_cmd);

  CLI::App* table =
      app.add_subcommand("table", "reproduce the published ratio tables");
  table->add_option("--family", cfg.family, "psub (r = 0..0.6) or lg (n = 0..5)");
  table->add_option("--criteria", cfg.criteria, "subset of reid,entropic,sum")
      ->delimiter(',');
  table->add_option("--plot-dir", cfg.plot_dir,
                    "directory for <family>_<criterion>.dat ratio curves");
  add_grid(table);
  add_output(table);

  CLI::App* certify = app.add_subcommand(
      "certify", "randomized no-violation check over hidden-state models");
  certify->add_option("--domain", cfg.domain, "gaussian, qubit or both")
      ->check(CLI::IsMember({"gaussian", "qubit", "both"}));
  certify->add_option("--samples", cfg.samples, "models per domain");
  certify->add_option("--seed", cfg.seed, "sampling seed");
  certify->add_option("--out", cfg.out, "output file (default stdout)");
  certify->add_option("--config", config_path,
                      "JSON config; command-line flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();

  try {
    if (!config_path.empty()) overlay_config(config_path, sub, cfg);
    // have_range means all three bounds arrived by flag or config.
    if (cfg.command == "sweep") {
      bool cfg_from = false, cfg_to = false, cfg_step = false;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        json doc;
        in >> doc;
        cfg_from = doc.contains("from");
        cfg_to = doc.contains("to");
        cfg_step = doc.contains("step");
      }
      cfg.have_range = (opt_from->count() > 0 || cfg_from) &&
                       (opt_to->count() > 0 || cfg_to) &&
                       (opt_step->count() > 0 || cfg_step);
    }

    if (cfg.command == "verdict") return run_verdict(cfg);
    if (cfg.command == "sweep") return run_sweep(cfg);
    if (cfg.command == "table") return run_table(cfg);
    if (cfg.command == "certify") return run_certify(cfg);
    throw std::invalid_argument("unknown command " + cfg.command);
  } catch (const std::invalid_argument& e) {
    std::cerr << "steerlab: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "steerlab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "steerlab: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace steerlab
