#pragma once

// Finite curve-class lattices with an exact rational intersection pairing.
//
// Class order inside a Lattice is the order of construction; every pivoting
// and iteration routine below follows that order, so certificates are
// reproducible.

#include "kodaira/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kodaira {

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class CurveKind { fibre_component, general_fibre, exceptional, strict_transform };

inline const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::fibre_component: return "fibre-component";
    case CurveKind::general_fibre: return "general-fibre";
    case CurveKind::exceptional: return "exceptional";
    case CurveKind::strict_transform: return "strict-transform";
  }
  return "?";
}

struct CurveClass {
  std::string id;
  CurveKind kind = CurveKind::fibre_component;

  friend bool operator==(const CurveClass&, const CurveClass&) = default;
};

using Matrix = std::vector<std::vector<Rational>>;

/// Finitely supported rational combination of curve classes. Zero entries
/// are never stored, so structural equality is equality of divisors.
class DivisorVec {
 public:
  DivisorVec() = default;
  DivisorVec(std::initializer_list<std::pair<const std::string, Rational>> init) {
    for (const auto& [id, c] : init) add(id, c);
  }

  Rational operator[](const std::string& id) const {
    auto it = coeffs_.find(id);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  void set(const std::string& id, const Rational& c) {
    if (c.is_zero())
      coeffs_.erase(id);
    else
      coeffs_[id] = c;
  }
  void add(const std::string& id, const Rational& c) { set(id, (*this)[id] + c); }

  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }
  auto begin() const { return coeffs_.begin(); }
  auto end() const { return coeffs_.end(); }
  const std::map<std::string, Rational>& entries() const { return coeffs_; }

  DivisorVec& operator+=(const DivisorVec& o) {
    for (const auto& [id, c] : o) add(id, c);
    return *this;
  }
  DivisorVec& operator-=(const DivisorVec& o) {
    for (const auto& [id, c] : o) add(id, -c);
    return *this;
  }
  DivisorVec& operator*=(const Rational& s) {
    if (s.is_zero()) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [id, c] : coeffs_) c *= s;
    return *this;
  }
  friend DivisorVec operator+(DivisorVec a, const DivisorVec& b) { return a += b; }
  friend DivisorVec operator-(DivisorVec a, const DivisorVec& b) { return a -= b; }
  friend DivisorVec operator*(const Rational& s, DivisorVec a) { return a *= s; }
  friend DivisorVec operator-(DivisorVec a) { return a *= Rational(-1); }
  friend bool operator==(const DivisorVec&, const DivisorVec&) = default;

  /// Renders as "c1*id1 + c2*id2 - ..." in id order; "0" when empty.
  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [id, c] : coeffs_) {
      Rational mag = abs(c);
      if (out.empty())
        out += c.sign() < 0 ? "-" : "";
      else
        out += c.sign() < 0 ? " - " : " + ";
      if (mag != Rational(1)) out += mag.str() + "*";
      out += id;
    }
    return out;
  }

  /// Inverse of str().
  static DivisorVec parse(std::string_view text) {
    DivisorVec d;
    std::string s;
    for (char ch : text)
      if (ch != ' ' && ch != '\t') s += ch;
    if (s == "0") return d;
    if (s.empty()) throw std::invalid_argument("empty divisor");
    std::size_t pos = 0;
    while (pos < s.size()) {
      int sign = 1;
      if (s[pos] == '+' || s[pos] == '-') {
        sign = s[pos] == '-' ? -1 : 1;
        ++pos;
      } else if (pos != 0) {
        throw std::invalid_argument("malformed divisor: " + std::string(text));
      }
      std::size_t end = pos;
      while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
      std::string term = s.substr(pos, end - pos);
      if (term.empty()) throw std::invalid_argument("malformed divisor: " + std::string(text));
      Rational c(1);
      auto star = term.find('*');
      if (star != std::string::npos) {
        c = Rational::parse(term.substr(0, star));
        term = term.substr(star + 1);
      }
      if (term.empty()) throw std::invalid_argument("malformed divisor: " + std::string(text));
      d.add(term, sign < 0 ? -c : c);
      pos = end;
    }
    return d;
  }

 private:
  std::map<std::string, Rational> coeffs_;
};

class Lattice {
 public:
  Lattice() = default;

  /// Gram must be square and symmetric with one row per class.
  Lattice(std::vector<CurveClass> classes, Matrix gram) : classes_(std::move(classes)), gram_(std::move(gram)) {
    if (gram_.size() != classes_.size()) throw std::invalid_argument("gram dimension differs from class count");
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      if (gram_[i].size() != classes_.size()) throw std::invalid_argument("gram is not square");
      if (!index_.emplace(classes_[i].id, i).second)
        throw std::invalid_argument("duplicate class id " + classes_[i].id);
    }
    for (std::size_t i = 0; i < gram_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (gram_[i][j] != gram_[j][i]) throw std::invalid_argument("gram is not symmetric");
  }

  std::size_t dimension() const { return classes_.size(); }
  const std::vector<CurveClass>& classes() const { return classes_; }
  const Matrix& gram() const { return gram_; }

  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  std::size_t index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw LookupError("unknown curve class '" + id + "'");
    return it->second;
  }
  const Rational& pairing(const std::string& a, const std::string& b) const {
    return gram_[index_of(a)][index_of(b)];
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(classes_.size());
    for (const auto& c : classes_) out.push_back(c.id);
    return out;
  }

  /// Restriction of the pairing to the named classes, in the order given.
  Lattice restrict_to(std::span<const std::string> ids) const {
    std::vector<CurveClass> cls;
    Matrix g(ids.size(), std::vector<Rational>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      cls.push_back(classes_[index_of(ids[i])]);
      for (std::size_t j = 0; j < ids.size(); ++j) g[i][j] = pairing(ids[i], ids[j]);
    }
    return Lattice(std::move(cls), std::move(g));
  }

  /// Orthogonal sum; ids must be disjoint.
  static Lattice direct_sum(const Lattice& a, const Lattice& b) {
    std::vector<CurveClass> cls = a.classes_;
    cls.insert(cls.end(), b.classes_.begin(), b.classes_.end());
    Matrix g(cls.size(), std::vector<Rational>(cls.size()));
    for (std::size_t i = 0; i < a.dimension(); ++i)
      for (std::size_t j = 0; j < a.dimension(); ++j) g[i][j] = a.gram_[i][j];
    for (std::size_t i = 0; i < b.dimension(); ++i)
      for (std::size_t j = 0; j < b.dimension(); ++j) g[a.dimension() + i][a.dimension() + j] = b.gram_[i][j];
    return Lattice(std::move(cls), std::move(g));
  }

 private:
  std::vector<CurveClass> classes_;
  Matrix gram_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Gram pairing a·b.
inline Rational intersect(const DivisorVec& a, const DivisorVec& b, const Lattice& l) {
  Rational total;
  for (const auto& [ia, ca] : a) {
    std::size_t i = l.index_of(ia);
    for (const auto& [ib, cb] : b) total += ca * cb * l.gram()[i][l.index_of(ib)];
  }
  return total;
}

namespace detail {

/// In-place reduced row echelon form; returns pivot columns in order.
inline std::vector<std::size_t> rref(Matrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = Rational(1) / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Scales a rational vector to a primitive integer vector with positive
/// leading (first nonzero) entry.
inline std::vector<Rational> primitive(std::vector<Rational> v) {
  BigInt den = 1;
  for (const auto& x : v)
    if (!x.is_zero()) den = lcm(den, x.denominator());
  BigInt g = 0;
  for (auto& x : v) {
    x *= Rational(den);
    g = gcd(g, x.numerator());
  }
  if (g == 0) return v;
  int lead = 0;
  for (const auto& x : v)
    if (!x.is_zero()) {
      lead = x.sign();
      break;
    }
  for (auto& x : v) x /= Rational(lead < 0 ? BigInt(-g) : g);
  return v;
}

/// Nullspace basis of a square matrix, one primitive vector per free column.
inline std::vector<std::vector<Rational>> nullspace(Matrix m) {
  std::size_t n = m.empty() ? 0 : m[0].size();
  auto pivots = rref(m, n);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(n);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(primitive(std::move(v)));
  }
  return basis;
}

}  // namespace detail

enum class Definiteness { negative_definite, negative_semidefinite, indefinite };

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::negative_definite: return "negative-definite";
    case Definiteness::negative_semidefinite: return "negative-semidefinite";
    case Definiteness::indefinite: return "indefinite";
  }
  return "?";
}

struct DefinitenessResult {
  Definiteness kind = Definiteness::indefinite;
  /// Primitive integer kernel vectors (semidefinite case only).
  std::vector<DivisorVec> kernel;
};

/// Exact sign classification of the pairing restricted to `ids`.
///
/// Works on the negated Gram A = -G by symmetric elimination: a positive
/// semidefinite matrix never shows a negative diagonal entry, and a zero
/// diagonal entry forces a zero row.
inline DefinitenessResult definiteness(const Lattice& l, std::span<const std::string> ids) {
  if (ids.empty()) throw std::invalid_argument("definiteness of an empty sub-lattice");
  const std::size_t n = ids.size();
  Matrix g(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = l.pairing(ids[i], ids[j]);

  Matrix a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = -g[i][j];

  std::vector<bool> done(n, false);
  std::size_t eliminated = 0;
  DefinitenessResult out;
  while (eliminated < n) {
    std::optional<std::size_t> pivot;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      if (a[k][k].sign() < 0) return out;
      if (!pivot && a[k][k].sign() > 0) pivot = k;
    }
    if (!pivot) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && !a[i][j].is_zero()) return out;
      break;
    }
    std::size_t p = *pivot;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || i == p || a[i][p].is_zero()) continue;
      Rational f = a[i][p] / a[p][p];
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j]) a[i][j] -= f * a[p][j];
    }
    done[p] = true;
    ++eliminated;
  }
  if (eliminated == n) {
    out.kind = Definiteness::negative_definite;
    return out;
  }
  out.kind = Definiteness::negative_semidefinite;
  for (const auto& v : detail::nullspace(g)) {
    DivisorVec d;
    for (std::size_t i = 0; i < n; ++i) d.set(ids[i], v[i]);
    out.kernel.push_back(std::move(d));
  }
  return out;
}

inline DefinitenessResult definiteness(const Lattice& l) {
  auto ids = l.ids();
  return definiteness(l, ids);
}

/// Finds x supported on `support` with (x·C) = rhs[C] for every C in
/// `support`. Singular but consistent systems get the solution with every
/// free variable set to zero (pivots chosen in support order).
inline std::optional<DivisorVec> solve_linear(const Lattice& l, std::span<const std::string> support,
                                              const DivisorVec& rhs) {
  for (const auto& [id, c] : rhs)
    if (std::find(support.begin(), support.end(), id) == support.end())
      throw std::invalid_argument("right-hand side names '" + id + "' outside the support");
  const std::size_t n = support.size();
  Matrix aug(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = l.pairing(support[i], support[j]);
    aug[i][n] = rhs[support[i]];
  }
  auto pivots = detail::rref(aug, n);
  for (std::size_t r = pivots.size(); r < n; ++r)
    if (!aug[r][n].is_zero()) return std::nullopt;
  DivisorVec x;
  for (std::size_t r = 0; r < pivots.size(); ++r) x.set(support[pivots[r]], aug[r][n]);
  return x;
}

}  // namespace kodaira
