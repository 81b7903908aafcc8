#pragma once

// Recomputes every stored table of the fibre database from first principles.
// Each check reports PASS, FAIL, or REVIEW (a recorded disagreement between a
// stored value and the local-algebra oracle).

#include "kodaira/blowup.hpp"
#include "kodaira/kodaira_db.hpp"
#include "kodaira/lattice.hpp"
#include "kodaira/polynomial.hpp"

#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kodaira {

enum class CheckStatus { pass, fail, review };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::review: return "REVIEW";
  }
  return "?";
}

struct CheckResult {
  std::string suite;
  std::string item;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  std::size_t count(CheckStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.status == s; }));
  }
  bool failed() const { return count(CheckStatus::fail) > 0; }
  bool failed(const std::string& suite, const std::string& item_prefix = "") const {
    return std::any_of(checks.begin(), checks.end(), [&](const CheckResult& c) {
      return c.status == CheckStatus::fail && c.suite == suite && c.item.rfind(item_prefix, 0) == 0;
    });
  }
  std::vector<std::string> suites() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (std::find(out.begin(), out.end(), c.suite) == out.end()) out.push_back(c.suite);
    return out;
  }
};

namespace detail {

class Checker {
 public:
  explicit Checker(VerifyReport& r) : report_(r) {}

  void check(const std::string& suite, const std::string& item, const std::function<std::string()>& body) {
    // body returns "" on success or a diff description; exceptions count as failures
    CheckResult c{suite, item, CheckStatus::pass, ""};
    try {
      std::string diff = body();
      if (!diff.empty()) {
        c.status = CheckStatus::fail;
        c.detail = diff;
      }
    } catch (const std::exception& e) {
      c.status = CheckStatus::fail;
      c.detail = std::string("error: ") + e.what();
    }
    report_.checks.push_back(std::move(c));
  }
  void add(CheckResult c) { report_.checks.push_back(std::move(c)); }

 private:
  VerifyReport& report_;
};

inline std::vector<KodairaType> euler_check_types() {
  std::vector<KodairaType> out = isotrivial_singular_types();
  for (int b = 1; b <= 10; ++b) out.push_back(KodairaType::I(b));
  for (int b = 1; b <= 10; ++b) out.push_back(KodairaType::I_star(b));
  out.push_back(KodairaType::I(0, 2));
  out.push_back(KodairaType::I(0, 3));
  out.push_back(KodairaType::I(2, 2));
  return out;
}

inline bool all_minus_two(const FibreModel& f) {
  return std::all_of(f.components.begin(), f.components.end(),
                     [](const Component& c) { return c.self_intersection == Rational(-2) && c.genus == 0; });
}

inline std::string bound_key(const KodairaType& t) { return t.family == Family::I_star && t.b > 0 ? "Ib*" : t.name(); }

inline Polynomial parse_xy(const std::string& s) { return Polynomial::parse(s, {"x", "y"}); }

/// Local inclusion of ideals at the origin.
inline bool locally_contained(const Ideal& a, const Ideal& b) {
  for (const auto& g : a.generators)
    if (!local_membership(g, b)) return false;
  return true;
}

}  // namespace detail

inline void verify_euler(const KodairaDatabase& db, VerifyReport& report) {
  detail::Checker c(report);
  for (const auto& t : detail::euler_check_types())
    c.check("euler", t.name(), [&] {
      int stored = euler_number(t, db);
      int oracle = euler_from_configuration(fibre_model(t, db));
      return stored == oracle ? "" : "stored " + std::to_string(stored) + ", configuration gives " + std::to_string(oracle);
    });
}

inline void verify_normalised(const KodairaDatabase& db, VerifyReport& report) {
  detail::Checker c(report);
  for (const auto& t : isotrivial_singular_types()) {
    FibreModel f = fibre_model(t, db);
    auto it = db.normalised_table.find(t.name());
    const DivisorVec table = it == db.normalised_table.end() ? DivisorVec{} : it->second;
    const DivisorVec formula = normalized_fibre(t, db);
    c.check("normalised", t.name() + "/support", [&] {
      for (const auto& [id, v] : table)
        if (!f.has_component(id)) return "table names unknown component " + id;
      return std::string();
    });
    const Rational e = Rational(f.euler);
    for (const auto& comp : f.components) {
      const std::string item = t.name() + "/" + comp.id;
      c.check("normalised", item, [&] {
        Rational tv = table[comp.id], fv = formula[comp.id];
        std::string diff;
        if (tv != fv) diff = "table " + tv.str() + ", formula 1 - (1 - e/12) nu gives " + fv.str();
        if (tv.sign() < 0 || tv >= Rational(1)) diff += (diff.empty() ? "" : "; ") + tv.str() + " outside [0, 1)";
        bool zero_expected = Rational(12) == Rational(comp.multiplicity) * (Rational(12) - e);
        if (tv.is_zero() != zero_expected)
          diff += (diff.empty() ? "" : "; ") + std::string("zero pattern differs from nu = 12/(12 - e)");
        return diff;
      });
    }
  }
}

inline void verify_lattices(const KodairaDatabase& db, VerifyReport& report) {
  detail::Checker c(report);
  std::vector<KodairaType> types = isotrivial_singular_types();
  for (int b = 1; b <= 10; ++b) types.push_back(KodairaType::I(b));
  for (int b = 1; b <= 10; ++b) types.push_back(KodairaType::I_star(b));
  for (const auto& t : types) {
    FibreModel f = fibre_model(t, db);
    Lattice l = f.lattice();
    c.check("lattice", t.name() + "/kernel", [&] {
      DefinitenessResult d = definiteness(l);
      if (d.kind != Definiteness::negative_semidefinite)
        return std::string("fibre Gram is ") + to_string(d.kind) + ", expected negative-semidefinite";
      if (d.kernel.size() != 1) return "kernel has dimension " + std::to_string(d.kernel.size());
      if (d.kernel.front() != f.multiplicity_vector())
        return "kernel " + d.kernel.front().str() + " differs from multiplicities " + f.multiplicity_vector().str();
      return std::string();
    });
    const auto ids = l.ids();
    const bool small = ids.size() <= 12 && !t.indexed();
    c.check("lattice", t.name() + "/proper-subsets", [&] {
      // all proper subsets for the tabulated types, complements of one component otherwise
      std::vector<std::vector<std::string>> subsets;
      if (small) {
        for (unsigned mask = 1; mask + 1 < (1u << ids.size()); ++mask) {
          std::vector<std::string> s;
          for (std::size_t i = 0; i < ids.size(); ++i)
            if (mask & (1u << i)) s.push_back(ids[i]);
          subsets.push_back(s);
        }
      } else {
        for (std::size_t skip = 0; skip < ids.size(); ++skip) {
          std::vector<std::string> s;
          for (std::size_t i = 0; i < ids.size(); ++i)
            if (i != skip) s.push_back(ids[i]);
          subsets.push_back(s);
        }
      }
      for (const auto& s : subsets)
        if (!s.empty() && definiteness(l, s).kind != Definiteness::negative_definite) {
          std::string names;
          for (const auto& id : s) names += (names.empty() ? "" : ",") + id;
          return "sub-configuration {" + names + "} is not negative-definite";
        }
      return std::string();
    });
    if (detail::all_minus_two(f) && ids.size() > 1)
      c.check("lattice", t.name() + "/dynkin", [&] {
        for (const auto& comp : f.components) {
          Rational neighbours;
          for (const auto& e : f.edges()) {
            if (e.a == comp.id) neighbours += Rational(f.component(e.b).multiplicity * e.multiplicity);
            if (e.b == comp.id) neighbours += Rational(f.component(e.a).multiplicity * e.multiplicity);
          }
          if (neighbours != Rational(2 * comp.multiplicity))
            return "2 nu(" + comp.id + ") = " + std::to_string(2 * comp.multiplicity) + " but neighbours give " +
                   neighbours.str();
        }
        return std::string();
      });
  }
}

inline void verify_bounds(const KodairaDatabase& db, VerifyReport& report) {
  detail::Checker c(report);
  std::vector<KodairaType> types = {KodairaType::I_star(0), KodairaType::II_star(), KodairaType::III_star(),
                                    KodairaType::IV_star()};
  for (int b = 1; b <= 10; ++b) types.push_back(KodairaType::I_star(b));
  for (const auto& t : types)
    c.check("bounds", t.name(), [&] {
      auto it = db.multiplicity_bound.find(detail::bound_key(t));
      if (it == db.multiplicity_bound.end()) return "no stored bound for " + detail::bound_key(t);
      int actual = fibre_model(t, db).max_multiplicity();
      return actual == it->second ? std::string()
                                  : "stored bound " + std::to_string(it->second) + ", largest multiplicity " +
                                        std::to_string(actual);
    });
}

/// Local equations, germs and Gamma-ideals of the singular points.
inline void verify_local_equations(const KodairaDatabase& db, VerifyReport& report) {
  detail::Checker c(report);
  for (const auto& t : isotrivial_singular_types()) {
    FibreModel f = fibre_model(t, db);
    for (std::size_t p = 0; p < f.points.size(); ++p) {
      const FibrePoint& pt = f.points[p];
      const std::string item = t.name() + "/" + exceptional_id(pt);
      c.check("local-equations", item + "/germs", [&] {
        Polynomial product = Polynomial::constant(2, 1);
        std::size_t branches = 0;
        for (const auto& g : pt.germs) {
          product = product * detail::parse_xy(g.equation);
          branches += g.components.size();
        }
        Polynomial eq = detail::parse_xy(pt.local_equation);
        if (product.monic() != eq.monic())
          return "product of germs " + product.str({"x", "y"}) + " differs from " + pt.local_equation;
        if (branches != pt.branches.size()) return std::string("branch count differs from germ data");
        return std::string();
      });
      c.check("local-equations", item + "/gamma-ideal", [&] {
        Polynomial eq = detail::parse_xy(pt.local_equation);
        Ideal tjurina{{"x", "y"}, {eq, eq.derivative(0), eq.derivative(1)}};
        Ideal gamma = Ideal::parse(pt.gamma_ideal);
        if (!detail::locally_contained(tjurina, gamma) || !detail::locally_contained(gamma, tjurina))
          return "Jacobian ideal " + tjurina.str() + " differs locally from stored " + gamma.str();
        return std::string();
      });
      for (std::size_t a = 0; a < pt.germs.size(); ++a)
        for (std::size_t b = a + 1; b < pt.germs.size(); ++b)
          c.check("local-equations", item + "/pair-" + std::to_string(a) + "-" + std::to_string(b), [&, a, b] {
            const auto& ga = pt.germs[a];
            const auto& gb = pt.germs[b];
            std::size_t len = local_colength(Ideal{{"x", "y"}, {detail::parse_xy(ga.equation), detail::parse_xy(gb.equation)}});
            Rational per_pair = Rational(static_cast<long long>(len)) /
                                Rational(static_cast<long long>(ga.components.size() * gb.components.size()));
            return per_pair == Rational(pt.pair_multiplicity)
                       ? std::string()
                       : "germs meet with multiplicity " + per_pair.str() + " per branch pair, stored " +
                             std::to_string(pt.pair_multiplicity);
          });
    }
  }
}

/// The pullback coefficient table against additivity and the oracle.
inline void verify_pullback(const KodairaDatabase& db, VerifyReport& report) {
  detail::Checker c(report);
  for (const auto& t : isotrivial_singular_types()) {
    FibreModel f = fibre_model(t, db);
    auto it = db.pullback_table.find(t.name());
    const DivisorVec table = it == db.pullback_table.end() ? DivisorVec{} : it->second;
    const DivisorVec normalised = normalized_fibre(t, db);

    c.check("pullback", t.name() + "/gamma-count", [&] {
      std::vector<std::string> expected;
      for (const auto& p : f.points) expected.push_back(exceptional_id(p));
      if (table.size() != expected.size())
        return std::to_string(f.points.size()) + " Gamma-points but " + std::to_string(table.size()) +
               " exceptional entries";
      for (const auto& id : expected)
        if (table[id].is_zero()) return "missing exceptional entry " + id;
      return std::string();
    });

    DivisorVec oracle;
    bool oracle_ok = true;
    c.check("pullback", t.name() + "/oracle-available", [&] {
      try {
        oracle = pullback_normalized_fibre_oracle(t, db);
      } catch (...) {
        oracle_ok = false;
        throw;
      }
      return std::string();
    });

    for (const auto& p : f.points) {
      const std::string y = exceptional_id(p);
      const bool reduced = same_ideal(Ideal::parse(p.gamma_ideal), Ideal::parse({"x", "y"}));
      if (reduced)
        c.check("pullback", t.name() + "/" + y + "/additivity", [&] {
          Rational sum;
          for (const auto& comp : point_components(p)) sum += normalised[comp];
          return sum == table[y] ? std::string()
                                 : "stored " + table[y].str() + ", sum over incident components " + sum.str();
        });
      if (!oracle_ok) continue;
      const Rational stored = table[y], computed = oracle[y];
      CheckResult r{"pullback", t.name() + "/" + y + "/oracle", CheckStatus::pass, ""};
      auto dit = db.documented_discrepancies.find(t.name());
      if (stored == computed && dit != db.documented_discrepancies.end())
        for (const auto& d : dit->second)
          if (d.exceptional == y && d.stored != stored) {
            r.status = CheckStatus::review;
            r.detail = "stored " + stored.str() + " agrees with the oracle; recorded discrepancy (" + d.stored.str() +
                       ") no longer present";
          }
      if (stored != computed) {
        r.status = CheckStatus::fail;
        r.detail = "stored " + stored.str() + ", oracle " + computed.str();
        if (dit != db.documented_discrepancies.end())
          for (const auto& d : dit->second)
            if (d.exceptional == y && d.stored == stored && d.oracle == computed) {
              r.status = CheckStatus::review;
              r.detail += " (recorded discrepancy)";
            }
      }
      detail::Checker(report).add(r);
    }

    c.check("pullback", t.name() + "/witness", [&] {
      CoefficientWitness w = small_coefficient_witness(t, db);
      return w.coefficient <= Rational(1, 2) ? std::string()
                                             : "least exceptional coefficient " + w.coefficient.str() + " exceeds 1/2";
    });

    c.check("pullback", t.name() + "/blown-up-kernel", [&] {
      BlownUpFibre b = blown_up_fibre(t, db);
      for (const auto& id : b.lattice.ids())
        if (!intersect(b.multiplicities, DivisorVec{{id, 1}}, b.lattice).is_zero())
          return "pullback of F meets " + id + " nontrivially";
      DefinitenessResult d = definiteness(b.lattice);
      if (d.kind != Definiteness::negative_semidefinite || d.kernel.size() != 1)
        return std::string("blown-up fibre Gram is not negative-semidefinite of corank 1");
      return std::string();
    });
  }
}

inline VerifyReport verify_tables(const KodairaDatabase& db = KodairaDatabase::builtin()) {
  VerifyReport r;
  verify_euler(db, r);
  verify_normalised(db, r);
  verify_lattices(db, r);
  verify_bounds(db, r);
  verify_local_equations(db, r);
  verify_pullback(db, r);
  return r;
}

/// Applies one fault "<table>/<type>[/<key>]=<value>" to a database copy:
///   euler/II*=9  euler/Ib=1  euler/Ib*=5  normalised/II*/e6=1/12
///   nu/II*/e6=5  self/III/e1=-1  bound/II*=5  pullback/II*/Y_{1,2}=1
///   gamma/II[/point]=x^3,y  pair/III/0=1  equation/II/0=y^2-x^5
///   germ/III/0/1=y-x^3
inline void apply_perturbation(KodairaDatabase& db, const std::string& fault) {
  auto eq = fault.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("perturbation '" + fault + "' has no '='");
  std::string path = fault.substr(0, eq), value = fault.substr(eq + 1);
  std::vector<std::string> parts;
  std::size_t start = 0;
  // split on '/' outside braces so that Y_{1,2} stays whole
  int depth = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] == '{') ++depth;
    if (path[i] == '}') --depth;
    if (path[i] == '/' && depth == 0) {
      parts.push_back(path.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(path.substr(start));
  auto bad = [&](const std::string& why) { return std::invalid_argument("perturbation '" + fault + "': " + why); };
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw bad("expected " + std::to_string(n - 1) + " path components after the table name");
  };
  auto model = [&](const std::string& type) -> FibreModel& {
    auto it = db.models.find(type);
    if (it == db.models.end()) throw bad("no stored model for " + type);
    return it->second;
  };
  auto component = [&](FibreModel& f, const std::string& id) -> Component& {
    for (auto& c : f.components)
      if (c.id == id) return c;
    throw bad("no component " + id);
  };
  auto point = [&](FibreModel& f, const std::string& index) -> FibrePoint& {
    std::size_t i = std::stoul(index);
    if (i >= f.points.size()) throw bad("no point " + index);
    return f.points[i];
  };
  auto integer = [&](const std::string& v) {
    try {
      return std::stoi(v);
    } catch (...) {
      throw bad("expected an integer value");
    }
  };

  const std::string& table = parts[0];
  if (table == "euler") {
    need(2);
    if (parts[1] == "Ib")
      db.euler_offset_I = integer(value);
    else if (parts[1] == "Ib*")
      db.euler_offset_I_star = integer(value);
    else if (db.euler.count(parts[1]))
      db.euler[parts[1]] = integer(value);
    else
      throw bad("no stored Euler number for " + parts[1]);
  } else if (table == "normalised") {
    need(3);
    if (!db.normalised_table.count(parts[1])) throw bad("no normalised table for " + parts[1]);
    component(model(parts[1]), parts[2]);
    db.normalised_table[parts[1]].set(parts[2], Rational::parse(value));
  } else if (table == "nu") {
    need(3);
    component(model(parts[1]), parts[2]).multiplicity = integer(value);
  } else if (table == "self") {
    need(3);
    component(model(parts[1]), parts[2]).self_intersection = Rational::parse(value);
  } else if (table == "bound") {
    need(2);
    if (!db.multiplicity_bound.count(parts[1])) throw bad("no stored bound for " + parts[1]);
    db.multiplicity_bound[parts[1]] = integer(value);
  } else if (table == "pullback") {
    need(3);
    auto it = db.pullback_table.find(parts[1]);
    if (it == db.pullback_table.end() || it->second[parts[2]].is_zero()) throw bad("no pullback entry");
    it->second.set(parts[2], Rational::parse(value));
  } else if (table == "gamma") {
    if (parts.size() != 2 && parts.size() != 3) throw bad("expected gamma/<type>[/<point>]");
    FibrePoint& p = point(model(parts[1]), parts.size() == 3 ? parts[2] : "0");
    p.gamma_ideal.clear();
    std::stringstream ss(value);
    for (std::string g; std::getline(ss, g, ',');) p.gamma_ideal.push_back(g);
  } else if (table == "pair") {
    need(3);
    point(model(parts[1]), parts[2]).pair_multiplicity = integer(value);
  } else if (table == "equation") {
    need(3);
    point(model(parts[1]), parts[2]).local_equation = value;
  } else if (table == "germ") {
    need(4);
    FibrePoint& p = point(model(parts[1]), parts[2]);
    std::size_t k = std::stoul(parts[3]);
    if (k >= p.germs.size()) throw bad("no germ " + parts[3]);
    p.germs[k].equation = value;
  } else {
    throw bad("unknown table '" + table + "'");
  }
}

}  // namespace kodaira
