#pragma once

// Exact feasibility of A x <= b over Q (x free), with a certificate either
// way: a feasible point, or Farkas multipliers y >= 0 with y^T A = 0 and
// y^T b < 0.

#include "kodaira/lattice.hpp"
#include "kodaira/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kodaira {

struct LinearSystem {
  Matrix a;                     // one row per inequality
  std::vector<Rational> b;
  std::vector<std::string> labels;
  std::size_t variables = 0;

  void add(std::vector<Rational> row, Rational rhs, std::string label) {
    if (row.size() != variables) throw std::invalid_argument("inequality arity mismatch");
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
    labels.push_back(std::move(label));
  }
};

enum class FeasibilityBackend { fourier_motzkin, simplex };

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> point;   // when feasible
  std::vector<Rational> farkas;  // when infeasible, one multiplier per row
};

inline bool satisfies(const LinearSystem& s, const std::vector<Rational>& x) {
  if (x.size() != s.variables) return false;
  for (std::size_t r = 0; r < s.a.size(); ++r) {
    Rational lhs;
    for (std::size_t j = 0; j < s.variables; ++j) lhs += s.a[r][j] * x[j];
    if (lhs > s.b[r]) return false;
  }
  return true;
}

inline bool is_farkas_certificate(const LinearSystem& s, const std::vector<Rational>& y) {
  if (y.size() != s.a.size()) return false;
  Rational yb;
  for (std::size_t r = 0; r < y.size(); ++r) {
    if (y[r].sign() < 0) return false;
    yb += y[r] * s.b[r];
  }
  if (yb.sign() >= 0) return false;
  for (std::size_t j = 0; j < s.variables; ++j) {
    Rational col;
    for (std::size_t r = 0; r < y.size(); ++r) col += y[r] * s.a[r][j];
    if (!col.is_zero()) return false;
  }
  return true;
}

namespace detail {

struct TrackedRow {
  std::vector<Rational> coeffs;
  Rational rhs;
  std::vector<Rational> multipliers;  // combination of the original rows
};

}  // namespace detail

/// Variables are eliminated in index order; back-substitution takes the
/// largest admissible value of each variable (the lower bound when no upper
/// bound exists, 0 when unconstrained).
inline FeasibilityResult fourier_motzkin(const LinearSystem& s) {
  using detail::TrackedRow;
  const std::size_t n = s.variables, m = s.a.size();
  std::vector<TrackedRow> rows;
  for (std::size_t r = 0; r < m; ++r) {
    TrackedRow t{s.a[r], s.b[r], std::vector<Rational>(m)};
    t.multipliers[r] = 1;
    rows.push_back(std::move(t));
  }

  std::vector<std::vector<TrackedRow>> stages;  // rows before eliminating variable k
  for (std::size_t k = 0; k < n; ++k) {
    stages.push_back(rows);
    std::vector<TrackedRow> pos, neg, next;
    for (auto& r : rows) {
      int sg = r.coeffs[k].sign();
      (sg > 0 ? pos : sg < 0 ? neg : next).push_back(std::move(r));
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        Rational sp = Rational(1) / p.coeffs[k], sq = Rational(1) / -q.coeffs[k];
        TrackedRow c{std::vector<Rational>(n), p.rhs * sp + q.rhs * sq, std::vector<Rational>(m)};
        for (std::size_t j = 0; j < n; ++j) c.coeffs[j] = p.coeffs[j] * sp + q.coeffs[j] * sq;
        for (std::size_t j = 0; j < m; ++j) c.multipliers[j] = p.multipliers[j] * sp + q.multipliers[j] * sq;
        c.coeffs[k] = 0;
        bool duplicate = false;
        for (const auto& e : next)
          if (e.coeffs == c.coeffs && e.rhs == c.rhs) {
            duplicate = true;
            break;
          }
        if (!duplicate) next.push_back(std::move(c));
      }
    rows = std::move(next);
  }

  FeasibilityResult out;
  for (const auto& r : rows)
    if (r.rhs.sign() < 0) {
      out.farkas = r.multipliers;
      return out;
    }

  out.feasible = true;
  out.point.assign(n, Rational(0));
  for (std::size_t k = n; k-- > 0;) {
    std::optional<Rational> lo, hi;
    for (const auto& r : stages[k]) {
      const Rational& a = r.coeffs[k];
      if (a.is_zero()) continue;
      Rational rest = r.rhs;
      for (std::size_t j = k + 1; j < n; ++j) rest -= r.coeffs[j] * out.point[j];
      Rational bound = rest / a;
      if (a.sign() > 0)
        hi = hi ? std::min(*hi, bound) : bound;
      else
        lo = lo ? std::max(*lo, bound) : bound;
    }
    out.point[k] = hi ? *hi : lo ? *lo : Rational(0);
  }
  return out;
}

/// Phase-one simplex with Bland's rule on the standard form
/// sigma_r (A_r x+ - A_r x- + s_r) = sigma_r b_r, all variables >= 0.
inline FeasibilityResult simplex(const LinearSystem& s) {
  const std::size_t n = s.variables, m = s.a.size();
  // columns: x+ (n), x- (n), slack (m), artificial (m), rhs
  const std::size_t cols = 2 * n + 2 * m;
  Matrix t(m + 1, std::vector<Rational>(cols + 1));
  std::vector<int> sigma(m, 1);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    sigma[r] = s.b[r].sign() < 0 ? -1 : 1;
    Rational sg(sigma[r]);
    for (std::size_t j = 0; j < n; ++j) {
      t[r][j] = sg * s.a[r][j];
      t[r][n + j] = -sg * s.a[r][j];
    }
    t[r][2 * n + r] = sg;
    t[r][2 * n + m + r] = 1;
    t[r][cols] = sg * s.b[r];
    basis[r] = 2 * n + m + r;
  }
  // objective row: minimise the sum of artificials, stored as reduced costs
  for (std::size_t j = 0; j <= cols; ++j) {
    Rational sum;
    for (std::size_t r = 0; r < m; ++r) sum += t[r][j];
    t[m][j] = (j >= 2 * n + m && j < cols) ? Rational(0) : -sum;
  }

  while (true) {
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j < cols; ++j)
      if (t[m][j].sign() < 0) {
        enter = j;
        break;
      }
    if (!enter) break;
    std::optional<std::size_t> leave;
    Rational best;
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][*enter].sign() <= 0) continue;
      Rational ratio = t[r][cols] / t[r][*enter];
      if (!leave || ratio < best || (ratio == best && basis[r] < basis[*leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (!leave) throw std::logic_error("phase-one simplex cannot be unbounded");
    const std::size_t pr = *leave, pc = *enter;
    Rational inv = Rational(1) / t[pr][pc];
    for (auto& v : t[pr]) v *= inv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == pr || t[r][pc].is_zero()) continue;
      Rational f = t[r][pc];
      for (std::size_t j = 0; j <= cols; ++j) t[r][j] -= f * t[pr][j];
    }
    basis[pr] = pc;
  }

  FeasibilityResult out;
  const Rational infeasibility = -t[m][cols];
  if (infeasibility.is_zero()) {
    out.feasible = true;
    out.point.assign(n, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < n) out.point[basis[r]] += t[r][cols];
      else if (basis[r] < 2 * n) out.point[basis[r] - n] -= t[r][cols];
    }
    return out;
  }
  // Duals z_r = 1 - reduced cost of artificial r; y_r = -sigma_r z_r.
  out.farkas.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    Rational z = Rational(1) - t[m][2 * n + m + r];
    out.farkas[r] = -Rational(sigma[r]) * z;
  }
  return out;
}

inline FeasibilityResult solve_feasibility(const LinearSystem& s,
                                           FeasibilityBackend backend = FeasibilityBackend::fourier_motzkin) {
  return backend == FeasibilityBackend::simplex ? simplex(s) : fourier_motzkin(s);
}

}  // namespace kodaira
