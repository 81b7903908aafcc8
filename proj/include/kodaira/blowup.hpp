#pragma once

// Local algebra at the singular points of reduced fibres and the blow-up of
// their ideals: colengths, Samuel multiplicities, pullback coefficients of
// curve germs, and the blown-up fibre lattices.

#include "kodaira/kodaira_db.hpp"
#include "kodaira/lattice.hpp"
#include "kodaira/polynomial.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kodaira {

class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for types whose reduced fibre is smooth (nothing is blown up).
class EmptyGammaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Length of the local ring at the origin modulo i.
inline std::size_t colength(const Ideal& i) { return local_colength(i); }

/// Length of the local ring at `point` modulo i.
inline std::size_t colength(const Ideal& i, const std::vector<Rational>& point) { return local_colength(i, point); }

namespace detail {

inline std::optional<int> pure_power(const std::vector<Polynomial>& gb, std::size_t var) {
  for (const auto& g : gb) {
    if (g.terms().size() != 1) continue;
    const Monomial& m = g.leading_monomial();
    bool pure = true;
    for (std::size_t v = 0; v < m.size(); ++v)
      if (v != var && m[v] != 0) pure = false;
    if (pure && m[var] > 0) return m[var];
  }
  return std::nullopt;
}

}  // namespace detail

/// Samuel multiplicity of a catalogue ideal: (x^a, y^b)^k gives a b k^2; a
/// two-generated ideal of finite colength (a complete intersection) gives
/// its colength. Anything else is unsupported.
inline std::size_t samuel_multiplicity(const Ideal& i) {
  if (i.nvars() != 2) throw UnsupportedError("Samuel multiplicity is implemented for plane ideals only");
  std::vector<Polynomial> gens;
  for (const auto& g : i.generators)
    if (!g.is_zero()) gens.push_back(g);
  auto gb = groebner_basis(gens);
  if (gb.size() == 1 && gb.front().degree() == 0) throw UnsupportedError("unit ideal has no multiplicity");

  auto x = detail::pure_power(gb, 0), y = detail::pure_power(gb, 1);
  if (x && y) {
    int g = std::gcd(*x, *y);
    for (int k = g; k >= 1; --k) {
      if (g % k) continue;
      Ideal base = Ideal{i.vars, {Polynomial::monomial({*x / k, 0}), Polynomial::monomial({0, *y / k})}};
      if (same_ideal(base.pow(static_cast<unsigned>(k)), Ideal{i.vars, gb}))
        return static_cast<std::size_t>((*x / k) * (*y / k) * k * k);
    }
  }
  if (gens.size() == 2 || gb.size() == 2) {
    // A finite-length quotient by two elements of a two-dimensional regular
    // local ring: a regular sequence, so e = length.
    std::size_t len = local_colength(Ideal{i.vars, gens});
    if (len > 0) return len;
  }
  throw UnsupportedError("ideal " + i.str() + " is outside the multiplicity catalogue");
}

/// Multiplicity e(I O_C) of the ideal on the curve germ C = {g = 0}, from the
/// first differences of n -> length O/(g, I^n), which are eventually constant.
inline std::size_t curve_multiplicity(const Polynomial& g, const Ideal& i) {
  constexpr int kStableRun = 3;
  constexpr int kMaxPower = 20;
  std::size_t previous_length = 0;
  std::vector<long long> diffs;
  for (int n = 1; n <= kMaxPower; ++n) {
    std::size_t len = local_colength(i.pow(static_cast<unsigned>(n)).with(g));
    diffs.push_back(static_cast<long long>(len) - static_cast<long long>(previous_length));
    previous_length = len;
    if (diffs.size() >= kStableRun &&
        std::all_of(diffs.end() - kStableRun, diffs.end(), [&](long long d) { return d == diffs.back(); }))
      return static_cast<std::size_t>(diffs.back());
  }
  throw ResourceError("Hilbert-Samuel differences of " + i.str() + " on the germ did not stabilise");
}

/// t with pi^* C = C~ + t E for the blow-up of i: the projection formula
/// (C~ + t E) E = 0 with C~ E = e(I O_C) and -E^2 = e(I).
inline Rational pullback_coefficient(const Polynomial& germ, const Ideal& i) {
  if (germ.is_zero()) throw std::invalid_argument("curve germ must be nonzero");
  if (germ.order() == 0) throw std::invalid_argument("curve germ must pass through the origin");
  return Rational(static_cast<long long>(curve_multiplicity(germ, i))) /
         Rational(static_cast<long long>(samuel_multiplicity(i)));
}

inline Rational pullback_coefficient(const std::string& germ, const Ideal& i) {
  return pullback_coefficient(Polynomial::parse(germ, i.vars), i);
}

/// Pullback coefficient t_{i,s} of each component through a point: each germ
/// contributes its coefficient, shared equally by conjugate branches.
inline std::map<std::string, Rational> point_pullback_coefficients(const FibrePoint& p) {
  Ideal ideal = Ideal::parse(p.gamma_ideal);
  std::map<std::string, Rational> out;
  for (const auto& germ : p.germs) {
    Rational t = pullback_coefficient(germ.equation, ideal) / Rational(static_cast<long long>(germ.components.size()));
    for (const auto& c : germ.components) out[c] += t;
  }
  return out;
}

/// Components of the blown-up fibre: strict transforms keep their ids,
/// exceptional curves are named by exceptional_id().
struct BlownUpFibre {
  KodairaType type;
  Lattice lattice;
  DivisorVec multiplicities;                 // pi^* F
  std::vector<std::string> strict;           // strict-transform ids
  std::vector<std::string> exceptional;      // one per Gamma-point, point order
  std::vector<std::map<std::string, Rational>> coefficients;  // t_{i,s} per point
  std::vector<Rational> samuel;              // e(I_s) per point
};

inline BlownUpFibre blown_up_fibre(const KodairaType& t, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  FibreModel f = fibre_model(t, db);
  if (f.points.empty()) throw EmptyGammaError("fibre " + t.name() + " has smooth reduction; nothing is blown up");
  BlownUpFibre out;
  out.type = t;
  for (const auto& c : f.components) out.strict.push_back(c.id);
  for (const auto& p : f.points) {
    out.exceptional.push_back(exceptional_id(p));
    out.coefficients.push_back(point_pullback_coefficients(p));
    out.samuel.push_back(Rational(static_cast<long long>(samuel_multiplicity(Ideal::parse(p.gamma_ideal)))));
  }

  const Lattice base = f.lattice();
  const std::size_t n = out.strict.size(), k = out.exceptional.size();
  std::vector<CurveClass> cls;
  for (const auto& id : out.strict) cls.push_back({id, CurveKind::strict_transform});
  for (const auto& id : out.exceptional) cls.push_back({id, CurveKind::exceptional});
  Matrix g(n + k, std::vector<Rational>(n + k));
  auto coeff = [&](std::size_t s, const std::string& id) {
    auto it = out.coefficients[s].find(id);
    return it == out.coefficients[s].end() ? Rational(0) : it->second;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Rational v = base.pairing(out.strict[a], out.strict[b]);
      for (std::size_t s = 0; s < k; ++s) v -= coeff(s, out.strict[a]) * coeff(s, out.strict[b]) * out.samuel[s];
      g[a][b] = v;
    }
  for (std::size_t s = 0; s < k; ++s) {
    g[n + s][n + s] = -out.samuel[s];
    for (std::size_t a = 0; a < n; ++a) g[a][n + s] = g[n + s][a] = coeff(s, out.strict[a]) * out.samuel[s];
  }
  out.lattice = Lattice(std::move(cls), std::move(g));

  for (const auto& c : f.components) out.multiplicities.set(c.id, c.multiplicity);
  for (std::size_t s = 0; s < k; ++s) {
    Rational m;
    for (const auto& c : f.components) m += Rational(c.multiplicity) * coeff(s, c.id);
    out.multiplicities.set(out.exceptional[s], m);
  }
  return out;
}

/// Pullback of a fibre divisor D to the blown-up fibre, using oracle
/// coefficients: strict part D, plus sum_i D_i t_{i,s} on Y_s.
inline DivisorVec pullback(const DivisorVec& d, const BlownUpFibre& f) {
  DivisorVec out = d;
  for (std::size_t s = 0; s < f.exceptional.size(); ++s) {
    Rational c;
    for (const auto& [id, t] : f.coefficients[s]) c += d[id] * t;
    out.set(f.exceptional[s], c);
  }
  return out;
}

namespace detail {

inline void require_gamma(const KodairaType& t, const KodairaDatabase& db) {
  if (fibre_model(t, db).points.empty())
    throw EmptyGammaError("fibre " + t.name() + " has smooth reduction; nothing is blown up");
}

}  // namespace detail

/// Pulled-back normalised fibre from the stored coefficient table: strict
/// transform of the normalised fibre plus the tabulated exceptional part.
inline DivisorVec pullback_normalized_fibre(const KodairaType& t,
                                            const KodairaDatabase& db = KodairaDatabase::builtin()) {
  detail::require_gamma(t, db);
  auto it = db.pullback_table.find(t.name());
  if (it == db.pullback_table.end())
    throw UnsupportedError("no stored pullback coefficients for " + t.name() + " (not an isotrivial type)");
  return normalized_fibre(t, db) + it->second;
}

/// Same divisor computed from the local-algebra oracle instead of the table.
inline DivisorVec pullback_normalized_fibre_oracle(const KodairaType& t,
                                                   const KodairaDatabase& db = KodairaDatabase::builtin()) {
  detail::require_gamma(t, db);
  return pullback(normalized_fibre(t, db), blown_up_fibre(t, db));
}

struct CoefficientWitness {
  std::string exceptional;
  Rational coefficient;
};

/// Exceptional curve of least coefficient in the pulled-back normalised
/// fibre (first in Gamma-point order on ties); its coefficient is <= 1/2 on
/// every isotrivial singular type.
inline CoefficientWitness small_coefficient_witness(const KodairaType& t,
                                                    const KodairaDatabase& db = KodairaDatabase::builtin()) {
  DivisorVec p = pullback_normalized_fibre(t, db);
  FibreModel f = fibre_model(t, db);
  std::optional<CoefficientWitness> best;
  for (const auto& point : f.points) {
    std::string id = exceptional_id(point);
    Rational c = p[id];
    if (!best || c < best->coefficient) best = CoefficientWitness{id, c};
  }
  return *best;
}

/// Whether f lies in i^k in the local ring at the origin.
inline bool ideal_power_membership(const Polynomial& f, const Ideal& i, unsigned k) {
  if (k == 0) throw std::invalid_argument("ideal power must be at least 1");
  return local_membership(f, i.pow(k));
}

/// Local equation of k times the normalised fibre at a Gamma-point: the
/// product of the point's germs raised to k times their coefficient.
/// nullopt when some exponent is not an integer.
inline std::optional<Polynomial> normalised_local_equation(const KodairaType& t, std::size_t point, unsigned k,
                                                           const KodairaDatabase& db = KodairaDatabase::builtin()) {
  FibreModel f = fibre_model(t, db);
  if (point >= f.points.size()) throw LookupError("fibre " + t.name() + " has no point " + std::to_string(point));
  DivisorVec n = normalized_fibre(t, db);
  const std::vector<std::string> vars{"x", "y"};
  Polynomial out = Polynomial::constant(2, 1);
  for (const auto& germ : f.points[point].germs) {
    Rational e = Rational(static_cast<long long>(k)) * n[germ.components.front()];
    if (!e.is_integer()) return std::nullopt;
    out = out * Polynomial::parse(germ.equation, vars).pow(static_cast<unsigned>(e.to_int64()));
  }
  return out;
}

}  // namespace kodaira
