#pragma once

// Numerical invariants of a relatively minimal elliptic fibration S -> C and
// the pseudo-effectivity verdict for its tangent bundle.

#include "kodaira/kodaira_db.hpp"
#include "kodaira/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kodaira {

struct FibrationSpec {
  int base_genus = 0;
  std::vector<KodairaType> fibres;

  /// Throws SpecError with E_GENUS, E_TYPE, E_MULT or E_EULER.
  void validate(const KodairaDatabase& db = KodairaDatabase::builtin()) const {
    if (base_genus < 0) throw SpecError("E_GENUS", "base_genus", "base genus must be non-negative");
    long long total = 0;
    for (std::size_t i = 0; i < fibres.size(); ++i) {
      fibres[i].validate("fibres[" + std::to_string(i) + "]");
      total += euler_number(fibres[i], db);
    }
    if (total % 12 != 0)
      throw SpecError("E_EULER", "fibres",
                      "sum of fibre Euler numbers is " + std::to_string(total) + ", not divisible by 12");
  }

  friend bool operator==(const FibrationSpec&, const FibrationSpec&) = default;
};

inline int chern2(const FibrationSpec& s, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  int total = 0;
  for (const auto& f : s.fibres) total += euler_number(f, db);
  return total;
}

/// chi(O_S) = c2 / 12 (Noether); rejects non-integral values.
inline int euler_chi(const FibrationSpec& s, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  int c2 = chern2(s, db);
  if (c2 % 12 != 0)
    throw SpecError("E_EULER", "fibres", "c2 = " + std::to_string(c2) + " is not divisible by 12");
  return c2 / 12;
}

/// sum over multiple fibres of (1 - 1/m).
inline Rational multiple_fibre_defect(const FibrationSpec& s) {
  Rational r;
  for (const auto& f : s.fibres)
    if (f.is_multiple()) r += Rational(1) - Rational(1, f.m);
  return r;
}

/// delta = chi + 2g - 2 + sum (1 - 1/m_j): the F-degree of K_S.
inline Rational delta_invariant(const FibrationSpec& s, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  return Rational(euler_chi(s, db)) + Rational(2 * s.base_genus - 2) + multiple_fibre_defect(s);
}

enum class Kappa { negative_infinity, zero, one };

inline std::string to_string(Kappa k) {
  switch (k) {
    case Kappa::negative_infinity: return "-inf";
    case Kappa::zero: return "0";
    case Kappa::one: return "1";
  }
  return "?";
}

inline Kappa kappa_from_string(const std::string& s) {
  if (s == "-inf") return Kappa::negative_infinity;
  if (s == "0") return Kappa::zero;
  if (s == "1") return Kappa::one;
  throw std::invalid_argument("unknown Kodaira dimension '" + s + "'");
}

/// Sign of delta: negative -> -inf, zero -> 0, positive -> 1. Only the
/// positive case is the classical equivalence; the other two are derived from
/// the F-degree of K_S.
inline Kappa kodaira_dimension(const FibrationSpec& s, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  int sg = delta_invariant(s, db).sign();
  return sg < 0 ? Kappa::negative_infinity : sg == 0 ? Kappa::zero : Kappa::one;
}

/// A relatively minimal fibration with kappa >= 0 is minimal; kappa = -inf
/// inputs are reported as uniruled and treated as non-minimal.
inline bool is_minimal(const FibrationSpec& s, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  return kodaira_dimension(s, db) != Kappa::negative_infinity;
}

/// Every singular fibre is a multiple of a smooth elliptic curve.
inline bool is_almost_smooth(const FibrationSpec& s) {
  for (const auto& f : s.fibres)
    if (!f.is_smooth_or_multiple_smooth()) return false;
  return true;
}

/// No fibre of type I_b or I_b* with b >= 1 (multiples included).
inline bool validate_isotrivial_consistency(const FibrationSpec& s) {
  for (const auto& f : s.fibres)
    if (f.indexed() && f.b >= 1) return false;
  return true;
}

enum class TangentVerdict { psef, not_psef, out_of_scope };

inline std::string to_string(TangentVerdict v) {
  switch (v) {
    case TangentVerdict::psef: return "psef";
    case TangentVerdict::not_psef: return "not-psef";
    case TangentVerdict::out_of_scope: return "out-of-scope";
  }
  return "?";
}

inline TangentVerdict tangent_verdict_from_string(const std::string& s) {
  if (s == "psef") return TangentVerdict::psef;
  if (s == "not-psef") return TangentVerdict::not_psef;
  if (s == "out-of-scope") return TangentVerdict::out_of_scope;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

/// For kappa >= 0: pseudo-effective iff c2 = 0. kappa = -inf is uniruled and
/// out of scope.
inline TangentVerdict tangent_psef_verdict(const FibrationSpec& s,
                                           const KodairaDatabase& db = KodairaDatabase::builtin()) {
  if (kodaira_dimension(s, db) == Kappa::negative_infinity) return TangentVerdict::out_of_scope;
  return chern2(s, db) == 0 ? TangentVerdict::psef : TangentVerdict::not_psef;
}

struct ProjectivisedKappa {
  std::optional<int> value;  // 1 - kappa(S) when defined
  std::string reason;
};

inline ProjectivisedKappa kappa_of_projectivized_tangent(const FibrationSpec& s,
                                                         const KodairaDatabase& db = KodairaDatabase::builtin()) {
  switch (tangent_psef_verdict(s, db)) {
    case TangentVerdict::psef:
      return {kodaira_dimension(s, db) == Kappa::zero ? 1 : 0, "1 - kappa(S)"};
    case TangentVerdict::not_psef:
      return {std::nullopt, "tangent bundle is not pseudo-effective"};
    case TangentVerdict::out_of_scope:
      return {std::nullopt, "uniruled surface (kappa = -inf) is out of scope"};
  }
  return {};
}

struct MultipleFibreTerm {
  std::size_t fibre = 0;  // index into the spec
  int m = 1;
  Rational f_degree;  // (m - 1) / m
};

/// Numerical class of K_S: (2g - 2 + chi) F + sum (m_j - 1) F_j, F_j = F / m_j.
struct CanonicalClass {
  Rational pullback_degree;
  std::vector<MultipleFibreTerm> multiple_fibres;

  Rational total_degree() const {
    Rational t = pullback_degree;
    for (const auto& m : multiple_fibres) t += m.f_degree;
    return t;
  }
};

inline CanonicalClass canonical_class_data(const FibrationSpec& s,
                                           const KodairaDatabase& db = KodairaDatabase::builtin()) {
  CanonicalClass k;
  k.pullback_degree = Rational(2 * s.base_genus - 2 + euler_chi(s, db));
  for (std::size_t i = 0; i < s.fibres.size(); ++i)
    if (s.fibres[i].is_multiple())
      k.multiple_fibres.push_back({i, s.fibres[i].m, Rational(s.fibres[i].m - 1, s.fibres[i].m)});
  return k;
}

/// The scalar (i + 1)(i/2 - j) with c1(Sym^i T_S (x) O(j K_S)) equal to it
/// times c1(S).
inline Rational sym_power_c1(int i, int j) {
  if (i < 1) throw std::invalid_argument("symmetric power index must be at least 1");
  if (j < 0) throw std::invalid_argument("twist must be non-negative");
  return Rational(i + 1) * (Rational(i, 2) - Rational(j));
}

}  // namespace kodaira
