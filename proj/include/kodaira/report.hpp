#pragma once

// The end-to-end invariants report for a fibration spec.

#include "kodaira/invariants.hpp"
#include "kodaira/y_restriction.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kodaira {

struct YRestrictionSummary {
  bool applicable = false;
  std::string reason;
  std::string criterion;  // "fires" or "not-applicable"
  std::string oracle;     // "psef" or "not-psef"
  std::vector<FibreWitness> witnesses;

  friend bool operator==(const YRestrictionSummary&, const YRestrictionSummary&) = default;
};

struct InvariantsReport {
  int base_genus = 0;
  std::vector<std::string> fibres;
  int c2 = 0;
  int chi = 0;
  Rational delta;
  Kappa kappa = Kappa::zero;
  bool kappa_rule_derived = false;  // true unless delta > 0
  bool minimal = false;
  bool almost_smooth = false;
  bool isotrivial_consistent = false;
  TangentVerdict tangent_psef = TangentVerdict::out_of_scope;
  std::optional<int> kappa_pt;
  std::string kappa_pt_reason;
  Rational canonical_pullback_degree;
  Rational canonical_total_degree;
  std::optional<YRestrictionSummary> y_restriction;

  friend bool operator==(const InvariantsReport&, const InvariantsReport&) = default;
};

inline const char* kVerdictCriterion = "T_S pseudo-effective iff S is minimal and c2(S) = 0";

inline InvariantsReport make_report(const FibrationSpec& s, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  s.validate(db);
  InvariantsReport r;
  r.base_genus = s.base_genus;
  for (const auto& f : s.fibres) r.fibres.push_back(f.name());
  r.c2 = chern2(s, db);
  r.chi = euler_chi(s, db);
  r.delta = delta_invariant(s, db);
  r.kappa = kodaira_dimension(s, db);
  r.kappa_rule_derived = r.delta.sign() <= 0;
  r.minimal = is_minimal(s, db);
  r.almost_smooth = is_almost_smooth(s);
  r.isotrivial_consistent = validate_isotrivial_consistency(s);
  r.tangent_psef = tangent_psef_verdict(s, db);
  ProjectivisedKappa pk = kappa_of_projectivized_tangent(s, db);
  r.kappa_pt = pk.value;
  r.kappa_pt_reason = pk.reason;
  CanonicalClass k = canonical_class_data(s, db);
  r.canonical_pullback_degree = k.pullback_degree;
  r.canonical_total_degree = k.total_degree();
  if (r.tangent_psef == TangentVerdict::not_psef) {
    YRestrictionResult y = y_restriction_verdict(s, db);
    YRestrictionSummary sum;
    sum.applicable = y.applicable;
    sum.reason = y.reason;
    if (y.applicable) {
      sum.criterion = y.criterion.verdict == SignCriterionVerdict::fires ? "fires" : "not-applicable";
      sum.oracle = y.oracle.psef ? "psef" : "not-psef";
      sum.witnesses = y.witnesses;
    }
    r.y_restriction = sum;
  }
  return r;
}

inline std::string render_text(const InvariantsReport& r) {
  std::ostringstream out;
  auto row = [&](const std::string& key, const std::string& value) {
    out << key << std::string(key.size() < 24 ? 24 - key.size() : 1, ' ') << value << "\n";
  };
  std::string fibres;
  for (std::size_t i = 0; i < r.fibres.size(); ++i) fibres += (i ? ", " : "") + r.fibres[i];
  row("base genus", std::to_string(r.base_genus));
  row("singular fibres", fibres.empty() ? "(none)" : fibres);
  row("c2", std::to_string(r.c2));
  row("chi(O_S)", std::to_string(r.chi));
  row("delta(f)", r.delta.str());
  row("kappa(S)", to_string(r.kappa) + (r.kappa_rule_derived ? "  (derived from the sign of delta)" : ""));
  row("K_S", "(2g - 2 + chi) F = " + r.canonical_pullback_degree.str() + " F, numerically " +
                 r.canonical_total_degree.str() + " F with multiple fibres");
  row("minimal", r.minimal ? "yes" : "no (uniruled)");
  row("almost smooth", r.almost_smooth ? "yes" : "no");
  row("isotrivial-consistent", r.isotrivial_consistent ? "yes" : "no");
  row("tangent bundle", to_string(r.tangent_psef));
  row("kappa(P(T_S), O(1))", r.kappa_pt ? std::to_string(*r.kappa_pt) : "undefined (" + r.kappa_pt_reason + ")");
  if (r.y_restriction) {
    const auto& y = *r.y_restriction;
    row("Y|_Y", y.applicable ? (y.criterion == "fires" ? "not pseudo-effective" : "undecided") + std::string(" (") +
                                   y.reason + ")"
                             : "not applicable (" + y.reason + ")");
    for (const auto& w : y.witnesses)
      row("  witness " + w.fibre, w.type + ": " + w.exceptional + " with coefficient " + w.coefficient.str());
    if (y.applicable) row("  oracle", y.oracle);
  }
  row("criterion", kVerdictCriterion);
  return out.str();
}

}  // namespace kodaira
