#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steerlab/entropy.hpp"
#include "steerlab/moments.hpp"
#include "steerlab/phase_space.hpp"

namespace steerlab {

enum class Criterion { reid, entropic, sum };

const char* criterion_name(Criterion c);
/// Throws std::invalid_argument for unknown names.
Criterion parse_criterion(const std::string& name);

struct VerdictDiagnostics {
  double clamped_mass = 0.0;
  int grid_points = 0;
  double box_halfwidth = 0.0;
};

/// Outcome of one criterion on one state. Ratio conventions, all steerable
/// strictly above 1:
///   reid:     lhs = product of inferred variances, rhs = 1/4, ratio = rhs/lhs
///   entropic: lhs = sum of conditional entropies, rhs = ln(pi e) (1 bit for
///             the discrete variant), ratio = rhs/lhs
///   sum:      lhs = uncertainty bound, rhs = sum of inferred stds,
///             ratio = lhs/rhs
struct SteeringVerdict {
  Criterion criterion;
  double lhs;
  double rhs;
  double ratio;
  bool steerable;
  Provenance provenance;
  VerdictDiagnostics diagnostics;
};

/// Resolution and provenance controls shared by the criterion evaluators.
/// grid_points overrides both the 4D moment sweep (default 81) and the 2D
/// entropy marginals (default 121).
struct CriterionOptions {
  Provenance provenance = Provenance::quadrature;
  std::optional<double> half_width;
  std::optional<int> grid_points;
};

/// Published measurement settings per family: the squeezed families infer
/// (X|Y) and (P_X|P_Y); LG infers (X|P_Y) and (P_X|Y).
QuadratureSettings default_settings(const StateDescriptor& desc);

/// Conditional-entropy pairs per family: squeezed families (X|Y), (P_X|P_Y);
/// LG (X|P_Y), (Y|P_X).
std::pair<AxisPair, AxisPair> entropic_pairs(const StateDescriptor& desc);

SteeringVerdict reid_verdict(const StateDescriptor& desc,
                             const CriterionOptions& opts = {});
SteeringVerdict entropic_verdict(const StateDescriptor& desc,
                                 const CriterionOptions& opts = {});
SteeringVerdict sum_verdict(const StateDescriptor& desc,
                            const CriterionOptions& opts = {});

/// Any supported family, CV or discrete: "tmsv:r=0.5", "psub:r=0.3",
/// "lg:m=0,n=2" or "werner:p=0.8".
struct FamilyTarget {
  std::string family;   // tmsv | psub | lg | werner
  double param;         // r, n or p
  bool is_werner = false;
  std::optional<StateDescriptor> cv;
  double werner_p = 0.0;
};

FamilyTarget parse_family_target(const std::string& text);
/// Builds the target for one sweep grid point of the named family.
FamilyTarget family_target(const std::string& family, double param);
/// Criteria a family supports (werner: sum and entropic only).
std::vector<Criterion> supported_criteria(const std::string& family);

/// Evaluates one criterion on any family target.
SteeringVerdict evaluate(const FamilyTarget& target, Criterion criterion,
                         const CriterionOptions& opts = {});

/// One sweep row; failed rows carry the error text and NaN verdict fields.
struct SweepRow {
  std::string family;
  double param;
  SteeringVerdict verdict;
  bool failed = false;
  std::string error;
};

/// Runs the criteria over a parameter grid in order. Validation problems
/// throw before any work; numerical failures mark the row and continue.
std::vector<SweepRow> sweep(const std::string& family,
                            const std::vector<double>& params,
                            const std::vector<Criterion>& criteria,
                            const CriterionOptions& opts = {});

/// CSV serialization. The header starts with the schema comment line.
std::string csv_header();
std::string csv_row(const SweepRow& row);

}  // namespace steerlab
