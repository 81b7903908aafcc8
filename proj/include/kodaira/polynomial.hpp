#pragma once

// Multivariate polynomials over Q with a fixed degree-reverse-lexicographic
// order, Buchberger completion, and quotient / local-length computations
// for zero-dimensional ideals.

#include "kodaira/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kodaira {

/// Raised when a computation would exceed the normal-form degree cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultDegreeCap = 24;

/// Degree cap for Groebner completion; KODAIRA_PSEF_DEGREE_CAP overrides it.
inline int degree_cap() {
  if (const char* env = std::getenv("KODAIRA_PSEF_DEGREE_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 100000) return static_cast<int>(v);
  }
  return kDefaultDegreeCap;
}

using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

/// True when a is larger than b in grevlex.
inline bool grevlex_greater(const Monomial& a, const Monomial& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

struct GrevlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_greater(a, b); }
};

inline bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Monomial monomial_lcm(const Monomial& a, const Monomial& b) {
  Monomial m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::max(a[i], b[i]);
  return m;
}

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, GrevlexDescending>;

  explicit Polynomial(std::size_t nvars = 2) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
  }
  static Polynomial variable(std::size_t nvars, std::size_t i) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[i] = 1;
    p.add_term(m, 1);
    return p;
  }
  static Polynomial monomial(const Monomial& m, const Rational& c = 1) {
    Polynomial p(m.size());
    p.add_term(m, c);
    return p;
  }

  /// Parses expressions such as "y^2 - x^3", "2*x*y", "1/2*x^2", "(y - x)^3".
  static Polynomial parse(const std::string& text, const std::vector<std::string>& vars);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }
  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const Rational& leading_coefficient() const { return terms_.begin()->second; }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  /// Lowest total degree of a term; -1 for the zero polynomial.
  int order() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = d < 0 ? total_degree(m) : std::min(d, total_degree(m));
    return d;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (m.size() != nvars_) throw std::invalid_argument("monomial arity mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(a.nvars_);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    return r;
  }
  friend Polynomial operator*(const Rational& s, Polynomial p) {
    if (s.is_zero()) return Polynomial(p.nvars_);
    for (auto& [m, c] : p.terms_) c *= s;
    return p;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(nvars_, 1);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Monic scaling (leading coefficient 1); zero stays zero.
  Polynomial monic() const {
    if (is_zero()) return *this;
    return (Rational(1) / leading_coefficient()) * *this;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial d = m;
      --d[var];
      r.add_term(d, c * Rational(m[var]));
    }
    return r;
  }

  /// Substitutes x_var -> x_var + shift.
  Polynomial translate(std::size_t var, const Rational& shift) const {
    if (shift.is_zero()) return *this;
    Polynomial lin = variable(nvars_, var) + constant(nvars_, shift);
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      Monomial rest = m;
      rest[var] = 0;
      r += c * (monomial(rest) * lin.pow(static_cast<unsigned>(m[var])));
    }
    return r;
  }

  std::string str(const std::vector<std::string>& vars) const;

 private:
  void check_arity(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial arity mismatch");
  }

  std::size_t nvars_;
  Terms terms_;
};

inline std::string monomial_str(const Monomial& m, const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars.at(i);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

inline std::string Polynomial::str(const std::vector<std::string>& vars) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    bool unit_monomial = total_degree(m) == 0;
    if (out.empty())
      out += c.sign() < 0 ? "-" : "";
    else
      out += c.sign() < 0 ? " - " : " + ";
    if (unit_monomial)
      out += mag.str();
    else {
      if (mag != Rational(1)) out += mag.str() + "*";
      out += monomial_str(m, vars);
    }
  }
  return out;
}

namespace detail {

class PolyParser {
 public:
  PolyParser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("polynomial '" + s_ + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial sum() {
    Polynomial acc(vars_.size());
    bool first = true;
    while (true) {
      int sign = 1;
      if (eat('-'))
        sign = -1;
      else if (!eat('+') && !first)
        break;
      Polynomial t = product();
      acc += sign < 0 ? Rational(-1) * t : t;
      first = false;
      skip();
      if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
    }
    return acc;
  }

  Polynomial product() {
    Polynomial acc = power();
    while (true) {
      skip();
      if (eat('*')) {
        acc = acc * power();
        continue;
      }
      if (pos_ < s_.size() && (s_[pos_] == '(' || std::isalpha(static_cast<unsigned char>(s_[pos_])))) {
        acc = acc * power();
        continue;
      }
      return acc;
    }
  }

  Polynomial power() {
    Polynomial base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent expected");
      base = base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      Polynomial p = sum();
      if (!eat(')')) fail("')' expected");
      return p;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
      return Polynomial::constant(vars_.size(), Rational::parse(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Polynomial::variable(vars_.size(), i);
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial Polynomial::parse(const std::string& text, const std::vector<std::string>& vars) {
  return detail::PolyParser(text, vars).parse();
}

/// Remainder of f on division by `basis` (full reduction of every term).
inline Polynomial normal_form(Polynomial f, const std::vector<Polynomial>& basis) {
  Polynomial rem(f.nvars());
  while (!f.is_zero()) {
    const Monomial lm = f.leading_monomial();
    const Rational lc = f.leading_coefficient();
    bool reduced = false;
    for (const auto& g : basis) {
      if (g.is_zero() || !divides(g.leading_monomial(), lm)) continue;
      Monomial q(lm.size());
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = lm[i] - g.leading_monomial()[i];
      f -= Polynomial::monomial(q, lc / g.leading_coefficient()) * g;
      reduced = true;
      break;
    }
    if (!reduced) {
      rem.add_term(lm, lc);
      f.add_term(lm, -lc);
    }
  }
  return rem;
}

namespace detail {

inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  Monomial l = monomial_lcm(f.leading_monomial(), g.leading_monomial());
  Monomial qf(l.size()), qg(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    qf[i] = l[i] - f.leading_monomial()[i];
    qg[i] = l[i] - g.leading_monomial()[i];
  }
  return Polynomial::monomial(qf, Rational(1) / f.leading_coefficient()) * f -
         Polynomial::monomial(qg, Rational(1) / g.leading_coefficient()) * g;
}

inline void check_cap(const Polynomial& p, int cap) {
  if (p.degree() > cap)
    throw ResourceError("degree " + std::to_string(p.degree()) + " exceeds the normal-form degree cap " +
                        std::to_string(cap));
}

}  // namespace detail

/// Reduced Groebner basis (monic, sorted by leading monomial, grevlex).
inline std::vector<Polynomial> groebner_basis(const std::vector<Polynomial>& generators, int cap = degree_cap()) {
  std::vector<Polynomial> g;
  for (const auto& p : generators) {
    if (p.is_zero()) continue;
    detail::check_cap(p, cap);
    g.push_back(p.monic());
  }
  if (g.empty()) return g;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);

  while (!pairs.empty()) {
    auto [i, j] = pairs.back();
    pairs.pop_back();
    const Monomial& a = g[i].leading_monomial();
    const Monomial& b = g[j].leading_monomial();
    bool coprime = true;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k] > 0 && b[k] > 0) coprime = false;
    if (coprime) continue;
    Polynomial h = normal_form(detail::s_polynomial(g[i], g[j]), g);
    if (h.is_zero()) continue;
    detail::check_cap(h, cap);
    g.push_back(h.monic());
    for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.emplace_back(k, g.size() - 1);
  }

  // Minimalise, then inter-reduce.
  std::vector<Polynomial> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j || !divides(g[j].leading_monomial(), g[i].leading_monomial())) continue;
      redundant = g[j].leading_monomial() != g[i].leading_monomial() || j < i;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  std::vector<Polynomial> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    Polynomial lead = Polynomial::monomial(minimal[i].leading_monomial(), 1);
    Polynomial tail = minimal[i] - lead;
    reduced.push_back(lead + normal_form(tail, others));
  }
  std::sort(reduced.begin(), reduced.end(), [](const Polynomial& x, const Polynomial& y) {
    return grevlex_greater(y.leading_monomial(), x.leading_monomial());
  });
  return reduced;
}

/// An ideal of Q[vars]; the generator list is kept as given.
struct Ideal {
  std::vector<std::string> vars;
  std::vector<Polynomial> generators;

  static Ideal parse(const std::vector<std::string>& gens, std::vector<std::string> vars = {"x", "y"}) {
    Ideal i{std::move(vars), {}};
    for (const auto& g : gens) i.generators.push_back(Polynomial::parse(g, i.vars));
    return i;
  }

  std::size_t nvars() const { return vars.size(); }

  Ideal operator+(const Ideal& o) const {
    Ideal r = *this;
    r.generators.insert(r.generators.end(), o.generators.begin(), o.generators.end());
    return r;
  }
  Ideal operator*(const Ideal& o) const {
    Ideal r{vars, {}};
    for (const auto& a : generators)
      for (const auto& b : o.generators) r.generators.push_back(a * b);
    return r;
  }
  Ideal pow(unsigned k) const {
    if (k == 0) return Ideal{vars, {Polynomial::constant(nvars(), 1)}};
    Ideal r = *this;
    for (unsigned i = 1; i < k; ++i) r = r * *this;
    r.generators = groebner_basis(r.generators);
    return r;
  }
  Ideal with(const Polynomial& p) const {
    Ideal r = *this;
    r.generators.push_back(p);
    return r;
  }

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (i) out += ", ";
      out += generators[i].str(vars);
    }
    return out + ")";
  }
};

/// The power m^n of the maximal ideal at the origin.
inline Ideal maximal_ideal_power(const std::vector<std::string>& vars, int n) {
  Ideal r{vars, {}};
  std::size_t k = vars.size();
  Monomial m(k, 0);
  // enumerate exponent vectors of total degree n
  std::vector<Monomial> out;
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == k) {
      m[i] = left;
      out.push_back(m);
      return;
    }
    for (int e = left; e >= 0; --e) {
      m[i] = e;
      self(self, i + 1, left - e);
    }
  };
  rec(rec, 0, n);
  for (const auto& mono : out) r.generators.push_back(Polynomial::monomial(mono));
  return r;
}

/// Standard monomials of a Groebner basis; nullopt if the quotient is
/// infinite-dimensional.
inline std::optional<std::vector<Monomial>> standard_monomials(const std::vector<Polynomial>& gb, std::size_t nvars) {
  if (gb.empty()) return std::nullopt;
  // zero-dimensional iff every variable has a pure power among the leading monomials
  std::vector<int> bound(nvars, -1);
  for (const auto& g : gb) {
    const Monomial& lm = g.leading_monomial();
    int nonzero = 0;
    std::size_t which = 0;
    for (std::size_t i = 0; i < nvars; ++i)
      if (lm[i] > 0) {
        ++nonzero;
        which = i;
      }
    if (nonzero == 0) return std::vector<Monomial>{};
    if (nonzero == 1 && (bound[which] < 0 || lm[which] < bound[which])) bound[which] = lm[which];
  }
  for (int b : bound)
    if (b < 0) return std::nullopt;
  std::vector<Monomial> out;
  Monomial m(nvars, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == nvars) {
      for (const auto& g : gb)
        if (divides(g.leading_monomial(), m)) return;
      out.push_back(m);
      return;
    }
    for (int e = 0; e < bound[i]; ++e) {
      m[i] = e;
      self(self, i + 1);
    }
    m[i] = 0;
  };
  rec(rec, 0);
  return out;
}

/// dim_Q Q[vars]/I, or nullopt when infinite.
inline std::optional<std::size_t> quotient_dimension(const Ideal& i) {
  auto gb = groebner_basis(i.generators);
  auto sm = standard_monomials(gb, i.nvars());
  if (!sm) return std::nullopt;
  return sm->size();
}

/// Ideal translated so that `point` moves to the origin.
inline Ideal translate_to_origin(const Ideal& i, const std::vector<Rational>& point) {
  Ideal r{i.vars, {}};
  for (auto g : i.generators) {
    for (std::size_t v = 0; v < point.size(); ++v) g = g.translate(v, point[v]);
    r.generators.push_back(std::move(g));
  }
  return r;
}

namespace detail {

/// Whether the zero-dimensional ideal with basis gb is supported only at the
/// origin: each variable must be nilpotent modulo it.
inline bool supported_at_origin_only(const std::vector<Polynomial>& gb, std::size_t nvars, std::size_t dim) {
  for (std::size_t v = 0; v < nvars; ++v) {
    Monomial m(nvars, 0);
    m[v] = static_cast<int>(dim);
    if (!normal_form(Polynomial::monomial(m), gb).is_zero()) return false;
  }
  return true;
}

struct LocalData {
  std::size_t length = 0;
  /// Groebner basis of an ideal whose global quotient equals the local one.
  std::vector<Polynomial> primary_basis;
};

inline LocalData local_data(const Ideal& i) {
  const int cap = degree_cap();
  auto gb = groebner_basis(i.generators, cap);
  if (auto sm = standard_monomials(gb, i.nvars()); sm) {
    if (sm->empty()) return {0, gb};
    if (supported_at_origin_only(gb, i.nvars(), sm->size())) return {sm->size(), gb};
  }
  // Truncate by m^N: once dim(I + m^N) = dim(I + m^(N+1)), Nakayama gives
  // m^N inside the localisation of I, so the value is the local length.
  std::optional<std::size_t> previous;
  std::vector<Polynomial> previous_basis;
  for (int n = 1; n <= cap + 1; ++n) {
    auto basis = groebner_basis((i + maximal_ideal_power(i.vars, n)).generators, cap + 1);
    auto dim = standard_monomials(basis, i.nvars())->size();
    if (previous && *previous == dim) return {dim, previous_basis};
    previous = dim;
    previous_basis = std::move(basis);
  }
  throw ResourceError("local length does not stabilise below the degree cap " + std::to_string(cap) +
                      " (is the ideal zero-dimensional at the origin?)");
}

}  // namespace detail

/// Length of the local ring at the origin modulo the ideal.
inline std::size_t local_colength(const Ideal& i) { return detail::local_data(i).length; }

/// Length of the local ring at `point` modulo the ideal.
inline std::size_t local_colength(const Ideal& i, const std::vector<Rational>& point) {
  return local_colength(translate_to_origin(i, point));
}

/// Membership of f in the localisation of I at the origin (I must be
/// zero-dimensional there).
inline bool local_membership(const Polynomial& f, const Ideal& i) {
  auto data = detail::local_data(i);
  return normal_form(f, data.primary_basis).is_zero();
}

/// Ideal equality in the polynomial ring (reduced Groebner bases agree).
inline bool same_ideal(const Ideal& a, const Ideal& b) {
  return groebner_basis(a.generators) == groebner_basis(b.generators);
}

}  // namespace kodaira
