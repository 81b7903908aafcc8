#pragma once

// The vertical class M - delta F on the blow-up Y of the Gamma-points, with
// M = sum_c (2 pi^* S~_c - sum_{s in c} Y_s), and its non-pseudo-effectivity
// via the fibre-sign criterion, cross-checked by the exact oracle.

#include "kodaira/blowup.hpp"
#include "kodaira/invariants.hpp"
#include "kodaira/zariski.hpp"

#include <string>
#include <vector>

namespace kodaira {

struct FibreWitness {
  std::string fibre;  // configuration id
  std::string type;
  std::string exceptional;
  Rational coefficient;

  friend bool operator==(const FibreWitness&, const FibreWitness&) = default;
};

struct YRestrictionResult {
  bool applicable = false;
  std::string reason;
  Rational delta;
  std::vector<FibreWitness> witnesses;
  FibreConfiguration configuration;
  VerticalDivisor divisor;          // M - delta pi^* F, stored coefficients
  VerticalDivisor oracle_divisor;   // same with coefficients from local algebra
  SignCriterionResult criterion;
  PsefResult oracle;                // on `divisor`
  PsefResult oracle_recomputed;     // on `oracle_divisor`

  bool not_psef() const { return applicable && criterion.verdict == SignCriterionVerdict::fires; }
};

namespace detail {

/// 2 P - sum_s Y_s for a pulled-back normalised fibre P.
inline DivisorVec y_fibre_part(const DivisorVec& pulled_back, const BlownUpFibre& f) {
  DivisorVec out = Rational(2) * pulled_back;
  for (const auto& y : f.exceptional) out.add(y, Rational(-1));
  return out;
}

}  // namespace detail

inline YRestrictionResult y_restriction_verdict(const FibrationSpec& s,
                                                const KodairaDatabase& db = KodairaDatabase::builtin()) {
  s.validate(db);
  YRestrictionResult out;
  if (!validate_isotrivial_consistency(s)) {
    out.reason = "fibre of type I_b or I_b* with b >= 1: not isotrivial";
    return out;
  }
  if (chern2(s, db) == 0) {
    out.reason = "c2 = 0";
    return out;
  }
  if (kodaira_dimension(s, db) != Kappa::one) {
    out.reason = "kappa(S) = " + to_string(kodaira_dimension(s, db)) + ", not 1";
    return out;
  }

  out.applicable = true;
  out.delta = delta_invariant(s, db);
  std::vector<ConfigFibre> fibres;
  for (std::size_t i = 0; i < s.fibres.size(); ++i) {
    const KodairaType& t = s.fibres[i];
    if (fibre_model(t, db).points.empty()) continue;  // normalised fibre vanishes
    const std::string id = "c" + std::to_string(i + 1);
    BlownUpFibre b = blown_up_fibre(t, db);
    fibres.push_back({id, t.name(), b.lattice, b.multiplicities});
    out.divisor.parts[id] = detail::y_fibre_part(pullback_normalized_fibre(t, db), b);
    out.oracle_divisor.parts[id] = detail::y_fibre_part(pullback(normalized_fibre(t, db), b), b);
    CoefficientWitness w = small_coefficient_witness(t, db);
    out.witnesses.push_back({id, t.name(), w.exceptional, w.coefficient});
  }
  out.configuration = FibreConfiguration(std::move(fibres));
  out.divisor.fibre_class_coefficient = -out.delta;
  out.oracle_divisor.fibre_class_coefficient = -out.delta;

  out.criterion = sign_criterion(SignCriterionInput::from_divisor(out.divisor), out.configuration);
  out.oracle = vertical_psef_oracle(out.divisor, out.configuration);
  out.oracle_recomputed = vertical_psef_oracle(out.oracle_divisor, out.configuration);
  out.reason = out.criterion.reason;
  return out;
}

}  // namespace kodaira
