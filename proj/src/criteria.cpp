#include "steerlab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "steerlab/discrete.hpp"

namespace steerlab {

namespace {

constexpr double kQuarterTurn = std::numbers::pi / 2.0;
const double kLnPiE = std::log(std::numbers::pi * std::numbers::e);

MomentOptions moment_options(const CriterionOptions& opts) {
  return {opts.provenance, opts.half_width, opts.grid_points};
}

EntropyOptions entropy_options(const CriterionOptions& opts) {
  return {opts.half_width, opts.grid_points};
}

VerdictDiagnostics table_diagnostics(const MomentTable& table) {
  return {0.0, table.grid_points(), table.box_halfwidth()};
}

SteeringVerdict make_verdict(Criterion criterion, double lhs, double rhs, double ratio,
                             Provenance provenance, VerdictDiagnostics diag) {
  return {criterion, lhs, rhs, ratio, ratio > 1.0, provenance, diag};
}

}  // namespace

const char* criterion_name(Criterion c) {
  switch (c) {
    case Criterion::reid: return "reid";
    case Criterion::entropic: return "entropic";
    case Criterion::sum: return "sum";
  }
  return "?";
}

Criterion parse_criterion(const std::string& name) {
  if (name == "reid") return Criterion::reid;
  if (name == "entropic") return Criterion::entropic;
  if (name == "sum") return Criterion::sum;
  throw std::invalid_argument("unknown criterion '" + name +
                              "' (expected reid, entropic or sum)");
}

QuadratureSettings default_settings(const StateDescriptor& desc) {
  if (std::holds_alternative<LaguerreGauss>(desc)) {
    // Infer X from P_Y and P_X from Y.
    return {0.0, kQuarterTurn, kQuarterTurn, 0.0};
  }
  return canonical_settings();
}

std::pair<AxisPair, AxisPair> entropic_pairs(const StateDescriptor& desc) {
  if (std::holds_alternative<LaguerreGauss>(desc))
    return {AxisPair::xpy, AxisPair::ypx};
  return {AxisPair::xy, AxisPair::pxpy};
}

SteeringVerdict reid_verdict(const StateDescriptor& desc, const CriterionOptions& opts) {
  const MomentTable& table = moment_table(desc, moment_options(opts));
  const QuadratureSettings s = default_settings(desc);
  const double v1 = inferred_variance(table, s.theta1, s.phi1);
  const double v2 = inferred_variance(table, s.theta2, s.phi2);
  const double lhs = v1 * v2;
  const double rhs = 0.25;
  return make_verdict(Criterion::reid, lhs, rhs, rhs / lhs, table.provenance(),
                      table_diagnostics(table));
}

SteeringVerdict sum_verdict(const StateDescriptor& desc, const CriterionOptions& opts) {
  const MomentTable& table = moment_table(desc, moment_options(opts));
  const QuadratureSettings s = default_settings(desc);
  const double bound = sum_uncertainty_bound(table, s.theta1, s.theta2);
  const double inferred = std::sqrt(inferred_variance(table, s.theta1, s.phi1)) +
                          std::sqrt(inferred_variance(table, s.theta2, s.phi2));
  return make_verdict(Criterion::sum, bound, inferred, bound / inferred,
                      table.provenance(), table_diagnostics(table));
}

SteeringVerdict entropic_verdict(const StateDescriptor& desc,
                                 const CriterionOptions& opts) {
  // TMSV is Gaussian, so the analytic path is exact; the other families are
  // evaluated from quadrature grids regardless of the requested provenance.
  if (opts.provenance == Provenance::analytic &&
      std::holds_alternative<Tmsv>(desc)) {
    const MomentTable& table = moment_table(desc, moment_options(opts));
    const QuadratureSettings s = default_settings(desc);
    const double h1 = gaussian_conditional_entropy(table.var_target(s.theta1),
                                                   table.var_estimator(s.phi1),
                                                   table.cov_cross(s.theta1, s.phi1));
    const double h2 = gaussian_conditional_entropy(table.var_target(s.theta2),
                                                   table.var_estimator(s.phi2),
                                                   table.cov_cross(s.theta2, s.phi2));
    const double lhs = h1 + h2;
    return make_verdict(Criterion::entropic, lhs, kLnPiE, kLnPiE / lhs,
                        Provenance::analytic, {});
  }
  const auto pairs = entropic_pairs(desc);
  const EntropyOptions eopts = entropy_options(opts);
  const EntropyReport first = conditional_entropy(desc, pairs.first, eopts);
  const EntropyReport second = conditional_entropy(desc, pairs.second, eopts);
  const double lhs = first.conditional + second.conditional;
  VerdictDiagnostics diag{std::max(first.clamped_mass, second.clamped_mass),
                          first.grid_points, first.box_halfwidth};
  return make_verdict(Criterion::entropic, lhs, kLnPiE, kLnPiE / lhs,
                      Provenance::quadrature, diag);
}

FamilyTarget parse_family_target(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string family = text.substr(0, colon == std::string::npos ? text.size() : colon);
  if (family == "werner") {
    if (colon == std::string::npos || text.compare(colon, 3, ":p=") != 0)
      throw std::invalid_argument("bad state descriptor '" + text +
                                  "': expected werner:p=<value>");
    std::size_t used = 0;
    double p = 0.0;
    const std::string value = text.substr(colon + 3);
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || !std::isfinite(p))
      throw std::invalid_argument("bad state descriptor '" + text +
                                  "': cannot parse number '" + value + "'");
    if (p < 0.0 || p > 1.0)
      throw std::domain_error("state '" + text + "': mixing p must lie in [0, 1]");
    FamilyTarget target;
    target.family = "werner";
    target.param = p;
    target.is_werner = true;
    target.werner_p = p;
    return target;
  }
  FamilyTarget target;
  target.cv = parse_descriptor(text);
  target.family = family;
  target.param = descriptor_param(*target.cv);
  return target;
}

FamilyTarget family_target(const std::string& family, double param) {
  if (family == "werner") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "werner:p=%.17g", param);
    return parse_family_target(buf);
  }
  if (family == "tmsv" || family == "psub") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s:r=%.17g", family.c_str(), param);
    return parse_family_target(buf);
  }
  if (family == "lg") {
    const int n = static_cast<int>(std::lround(param));
    if (param != static_cast<double>(n))
      throw std::invalid_argument("lg sweep parameter must be an integer mode index");
    char buf[64];
    std::snprintf(buf, sizeof buf, "lg:m=0,n=%d", n);
    return parse_family_target(buf);
  }
  throw std::invalid_argument("unknown family '" + family +
                              "' (expected tmsv, psub, lg or werner)");
}

std::vector<Criterion> supported_criteria(const std::string& family) {
  if (family == "werner") return {Criterion::sum, Criterion::entropic};
  if (family == "tmsv" || family == "psub" || family == "lg")
    return {Criterion::reid, Criterion::entropic, Criterion::sum};
  throw std::invalid_argument("unknown family '" + family +
                              "' (expected tmsv, psub, lg or werner)");
}

SteeringVerdict evaluate(const FamilyTarget& target, Criterion criterion,
                         const CriterionOptions& opts) {
  if (target.is_werner) {
    switch (criterion) {
      case Criterion::sum: return werner_sum_verdict(target.werner_p);
      case Criterion::entropic: return werner_entropic_verdict(target.werner_p);
      case Criterion::reid:
        throw std::invalid_argument("the reid criterion is not defined for werner states");
    }
  }
  switch (criterion) {
    case Criterion::reid: return reid_verdict(*target.cv, opts);
    case Criterion::entropic: return entropic_verdict(*target.cv, opts);
    case Criterion::sum: return sum_verdict(*target.cv, opts);
  }
  throw std::invalid_argument("unknown criterion");
}

std::vector<SweepRow> sweep(const std::string& family, const std::vector<double>& params,
                            const std::vector<Criterion>& criteria,
                            const CriterionOptions& opts) {
  if (params.empty()) throw std::invalid_argument("sweep: empty parameter grid");
  if (criteria.empty()) throw std::invalid_argument("sweep: empty criteria list");

  // Validate the whole grid before doing any numerical work.
  std::vector<FamilyTarget> targets;
  targets.reserve(params.size());
  for (double p : params) targets.push_back(family_target(family, p));
  const std::vector<Criterion> allowed = supported_criteria(family);
  for (Criterion c : criteria)
    if (std::find(allowed.begin(), allowed.end(), c) == allowed.end())
      throw std::invalid_argument(std::string("criterion '") + criterion_name(c) +
                                  "' is not supported for family '" + family + "'");

  std::vector<SweepRow> rows;
  rows.reserve(params.size() * criteria.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (Criterion c : criteria) {
      SweepRow row;
      row.family = family;
      row.param = params[i];
      try {
        row.verdict = evaluate(targets[i], c, opts);
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.verdict = {c, nan, nan, nan, false,
                       opts.provenance, VerdictDiagnostics{}};
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string csv_header() {
  return "# steerlab-schema v1\n"
         "family,param,criterion,lhs,rhs,ratio,steerable,clamped_mass,grid_n,"
         "box_halfwidth\n";
}

std::string csv_row(const SweepRow& row) {
  char buf[320];
  const SteeringVerdict& v = row.verdict;
  std::snprintf(buf, sizeof buf, "%s,%.12g,%s,%.12g,%.12g,%.12g,%s,%.12g,%d,%.12g\n",
                row.family.c_str(), row.param, criterion_name(v.criterion), v.lhs,
                v.rhs, v.ratio, v.steerable ? "true" : "false",
                v.diagnostics.clamped_mass, v.diagnostics.grid_points,
                v.diagnostics.box_halfwidth);
  std::string out = buf;
  if (row.failed) {
    out += "# row-error: family=" + row.family + " param=";
    char num[32];
    std::snprintf(num, sizeof num, "%.12g", row.param);
    out += num;
    out += " criterion=";
    out += criterion_name(v.criterion);
    out += ": " + row.error + "\n";
  }
  return out;
}

}  // namespace steerlab
