#pragma once

// Kodaira singular fibre types as weighted dual graphs, with the stored
// tables (Euler numbers, normalised fibres, multiplicity bounds, local
// equations, singular-point ideals, exceptional pullback coefficients).
//
// Everything in KodairaDatabase is data. verify.hpp recomputes each entry
// from first principles, so a database can be perturbed and re-checked.

#include "kodaira/lattice.hpp"
#include "kodaira/polynomial.hpp"
#include "kodaira/rational.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kodaira {

/// Input or validation failure; `code` is one of E_SYNTAX, E_TYPE, E_MULT,
/// E_EULER, E_GENUS and `field` locates the offending input.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string code, std::string field, const std::string& message)
      : std::runtime_error(code + (field.empty() ? "" : " at " + field) + ": " + message),
        code_(std::move(code)),
        field_(std::move(field)) {}
  const std::string& code() const { return code_; }
  const std::string& field() const { return field_; }

 private:
  std::string code_;
  std::string field_;
};

enum class Family { I, I_star, II, III, IV, II_star, III_star, IV_star };

struct KodairaType {
  Family family = Family::I;
  int b = 0;  // index for I_b and I_b^*
  int m = 1;  // multiplicity; > 1 only on the I_b family

  static constexpr int kMaxIndex = 10000;

  static KodairaType make(Family f, int b = 0, int m = 1) {
    KodairaType t{f, b, m};
    t.validate();
    return t;
  }
  static KodairaType smooth() { return {Family::I, 0, 1}; }
  static KodairaType I(int b, int m = 1) { return make(Family::I, b, m); }
  static KodairaType I_star(int b) { return make(Family::I_star, b); }
  static KodairaType II() { return {Family::II}; }
  static KodairaType III() { return {Family::III}; }
  static KodairaType IV() { return {Family::IV}; }
  static KodairaType II_star() { return {Family::II_star}; }
  static KodairaType III_star() { return {Family::III_star}; }
  static KodairaType IV_star() { return {Family::IV_star}; }

  bool indexed() const { return family == Family::I || family == Family::I_star; }
  bool is_multiple() const { return m > 1; }
  bool is_smooth_or_multiple_smooth() const { return family == Family::I && b == 0; }

  void validate(const std::string& field = "") const {
    if (b < 0) throw SpecError("E_TYPE", field, "fibre index b must be non-negative");
    if (!indexed() && b != 0) throw SpecError("E_TYPE", field, "index b only applies to I_b and I_b* fibres");
    if (m < 1) throw SpecError("E_MULT", field, "multiplicity must be at least 1");
    if (m > 1 && family != Family::I) throw SpecError("E_MULT", field, "multiple fibres must be of type mI_b");
    if (b > kMaxIndex) throw SpecError("E_TYPE", field, "fibre index b exceeds " + std::to_string(kMaxIndex));
    if (m > kMaxIndex) throw SpecError("E_MULT", field, "multiplicity exceeds " + std::to_string(kMaxIndex));
  }

  /// Name without multiplicity: "I3", "I0*", "II*", ...
  std::string base_name() const {
    switch (family) {
      case Family::I: return "I" + std::to_string(b);
      case Family::I_star: return "I" + std::to_string(b) + "*";
      case Family::II: return "II";
      case Family::III: return "III";
      case Family::IV: return "IV";
      case Family::II_star: return "II*";
      case Family::III_star: return "III*";
      case Family::IV_star: return "IV*";
    }
    return "?";
  }
  /// Kodaira symbol with multiplicity prefix, e.g. "2I0".
  std::string name() const { return (m > 1 ? std::to_string(m) : "") + base_name(); }

  /// Accepts the forms produced by name() plus "Ib*" spelled with b.
  static KodairaType parse(const std::string& text, const std::string& field = "") {
    static const std::regex fixed(R"(^(II|III|IV)(\*?)$)");
    static const std::regex indexed_re(R"(^(\d*)I(\d+)(\*?)$)");
    std::smatch match;
    if (std::regex_match(text, match, fixed)) {
      bool star = match[2].length() > 0;
      std::string base = match[1];
      Family f = base == "II" ? (star ? Family::II_star : Family::II)
               : base == "III" ? (star ? Family::III_star : Family::III)
                               : (star ? Family::IV_star : Family::IV);
      return {f, 0, 1};
    }
    if (std::regex_match(text, match, indexed_re)) {
      int m = 1, b = 0;
      try {
        m = match[1].length() ? std::stoi(match[1]) : 1;
        b = std::stoi(match[2]);
      } catch (const std::out_of_range&) {
        throw SpecError("E_TYPE", field, "fibre index out of range in '" + text + "'");
      }
      KodairaType t{match[3].length() ? Family::I_star : Family::I, b, m};
      t.validate(field);
      return t;
    }
    throw SpecError("E_TYPE", field, "unknown fibre type '" + text + "'");
  }

  friend bool operator==(const KodairaType&, const KodairaType&) = default;
  friend auto operator<=>(const KodairaType&, const KodairaType&) = default;
};

/// The seven singular types that occur in isotrivial fibrations.
inline const std::vector<KodairaType>& isotrivial_singular_types() {
  static const std::vector<KodairaType> types = {KodairaType::II(),      KodairaType::III(),     KodairaType::IV(),
                                                 KodairaType::I_star(0), KodairaType::II_star(), KodairaType::III_star(),
                                                 KodairaType::IV_star()};
  return types;
}

struct Component {
  std::string id;
  int multiplicity = 1;
  Rational self_intersection;
  int genus = 0;  // geometric genus of the normalisation

  friend bool operator==(const Component&, const Component&) = default;
};

/// Branches of the reduced fibre at a point that share one irreducible
/// factor of the local equation over Q. A group naming several components is
/// a set of Galois-conjugate branches; they share local invariants equally.
struct BranchGerm {
  std::vector<std::string> components;
  std::string equation;

  friend bool operator==(const BranchGerm&, const BranchGerm&) = default;
};

/// A singular point of the reduced fibre.
struct FibrePoint {
  std::vector<std::string> branches;  // component of each branch; repeats for nodes of one curve
  int pair_multiplicity = 1;          // local intersection of two branches on distinct components
  std::string local_equation;         // reduced local equation in x, y
  std::vector<std::string> gamma_ideal;
  std::vector<BranchGerm> germs;

  friend bool operator==(const FibrePoint&, const FibrePoint&) = default;
};

struct Edge {
  std::string a, b;
  int multiplicity = 0;
  std::size_t point = 0;
};

struct FibreModel {
  KodairaType type;
  std::vector<Component> components;
  std::vector<FibrePoint> points;
  int euler = 0;

  const Component& component(const std::string& id) const {
    for (const auto& c : components)
      if (c.id == id) return c;
    throw LookupError("fibre " + type.name() + " has no component '" + id + "'");
  }
  bool has_component(const std::string& id) const {
    return std::any_of(components.begin(), components.end(), [&](const Component& c) { return c.id == id; });
  }

  std::vector<std::string> component_ids() const {
    std::vector<std::string> out;
    for (const auto& c : components) out.push_back(c.id);
    return out;
  }

  /// One edge per unordered pair of branches on distinct components at a point.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto& br = points[p].branches;
      for (std::size_t i = 0; i < br.size(); ++i)
        for (std::size_t j = i + 1; j < br.size(); ++j)
          if (br[i] != br[j]) out.push_back({br[i], br[j], points[p].pair_multiplicity, p});
    }
    return out;
  }

  Lattice lattice() const {
    std::vector<CurveClass> cls;
    std::map<std::string, std::size_t> idx;
    for (const auto& c : components) {
      idx[c.id] = cls.size();
      cls.push_back({c.id, CurveKind::fibre_component});
    }
    Matrix g(cls.size(), std::vector<Rational>(cls.size()));
    for (const auto& c : components) g[idx[c.id]][idx[c.id]] = c.self_intersection;
    for (const auto& e : edges()) {
      g[idx.at(e.a)][idx.at(e.b)] += e.multiplicity;
      g[idx.at(e.b)][idx.at(e.a)] += e.multiplicity;
    }
    return Lattice(std::move(cls), std::move(g));
  }

  DivisorVec multiplicity_vector() const {
    DivisorVec v;
    for (const auto& c : components) v.set(c.id, c.multiplicity);
    return v;
  }

  int max_multiplicity() const {
    int m = 0;
    for (const auto& c : components) m = std::max(m, c.multiplicity);
    return m;
  }
};

/// Reference to a stored pullback entry that is known to disagree with the
/// local-algebra oracle; verification reports it for review instead of
/// failing, as long as both values are still the recorded ones.
struct DocumentedDiscrepancy {
  std::string exceptional;
  Rational stored;
  Rational oracle;
};

struct KodairaDatabase {
  /// Explicit models of the seven isotrivial singular types, keyed by base_name().
  std::map<std::string, FibreModel> models;
  /// Euler numbers of the non-indexed types and of I0*.
  std::map<std::string, int> euler;
  int euler_offset_I = 0;
  int euler_offset_I_star = 6;
  /// Normalised fibres as tabulated; zero coefficients omitted.
  std::map<std::string, DivisorVec> normalised_table;
  /// Largest component multiplicity per starred family ("Ib*" covers b >= 1).
  std::map<std::string, int> multiplicity_bound;
  /// Exceptional coefficients of the pulled-back normalised fibre.
  std::map<std::string, DivisorVec> pullback_table;
  std::map<std::string, std::vector<DocumentedDiscrepancy>> documented_discrepancies;

  static const KodairaDatabase& builtin();
};

namespace detail {

inline FibrePoint crossing(const std::string& a, const std::string& b) {
  // a is {x = 0}, b is {y = 0}
  return FibrePoint{{a, b}, 1, "x*y", {"x", "y"}, {BranchGerm{{a}, "x"}, BranchGerm{{b}, "y"}}};
}

inline Component rational(const std::string& id, int mult, int self = -2) { return {id, mult, Rational(self), 0}; }

inline FibreModel tree_model(KodairaType t, const std::vector<int>& multiplicities,
                             const std::vector<std::pair<int, int>>& edge_list) {
  FibreModel f;
  f.type = t;
  for (std::size_t i = 0; i < multiplicities.size(); ++i)
    f.components.push_back(rational("e" + std::to_string(i + 1), multiplicities[i]));
  for (auto [a, b] : edge_list) f.points.push_back(crossing("e" + std::to_string(a), "e" + std::to_string(b)));
  return f;
}

inline KodairaDatabase make_builtin() {
  KodairaDatabase db;

  {
    FibreModel f;
    f.type = KodairaType::II();
    f.components = {rational("e1", 1, 0)};
    f.points = {FibrePoint{{"e1"}, 0, "y^2 - x^3", {"x^2", "y"}, {BranchGerm{{"e1"}, "y^2 - x^3"}}}};
    db.models["II"] = f;
  }
  {
    FibreModel f;
    f.type = KodairaType::III();
    f.components = {rational("e1", 1), rational("e2", 1)};
    f.points = {FibrePoint{{"e1", "e2"}, 2, "y^2 - x^4", {"x^3", "y"},
                           {BranchGerm{{"e1"}, "y - x^2"}, BranchGerm{{"e2"}, "y + x^2"}}}};
    db.models["III"] = f;
  }
  {
    // The lines e2, e3 are conjugate over Q(zeta_3); they form one germ.
    FibreModel f;
    f.type = KodairaType::IV();
    f.components = {rational("e1", 1), rational("e2", 1), rational("e3", 1)};
    f.points = {FibrePoint{{"e1", "e2", "e3"}, 1, "y^3 - x^3", {"x^2", "y^2"},
                           {BranchGerm{{"e1"}, "y - x"}, BranchGerm{{"e2", "e3"}, "y^2 + x*y + x^2"}}}};
    db.models["IV"] = f;
  }
  db.models["I0*"] = tree_model(KodairaType::I_star(0), {2, 1, 1, 1, 1}, {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
  db.models["II*"] = tree_model(KodairaType::II_star(), {1, 2, 3, 4, 5, 6, 3, 4, 2},
                                {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {6, 8}, {8, 9}});
  db.models["III*"] = tree_model(KodairaType::III_star(), {1, 2, 3, 4, 2, 3, 2, 1},
                                 {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {4, 6}, {6, 7}, {7, 8}});
  db.models["IV*"] = tree_model(KodairaType::IV_star(), {1, 2, 1, 2, 1, 2, 3},
                                {{1, 2}, {3, 4}, {5, 6}, {2, 7}, {4, 7}, {6, 7}});

  db.euler = {{"II", 2}, {"III", 3}, {"IV", 4}, {"I0*", 6}, {"II*", 10}, {"III*", 9}, {"IV*", 8}};

  auto q = [](long long n, long long d) { return Rational(n, d); };
  db.normalised_table["II"] = {{"e1", q(1, 6)}};
  db.normalised_table["III"] = {{"e1", q(1, 4)}, {"e2", q(1, 4)}};
  db.normalised_table["IV"] = {{"e1", q(1, 3)}, {"e2", q(1, 3)}, {"e3", q(1, 3)}};
  db.normalised_table["I0*"] = {{"e2", q(1, 2)}, {"e3", q(1, 2)}, {"e4", q(1, 2)}, {"e5", q(1, 2)}};
  db.normalised_table["II*"] = {{"e1", q(5, 6)}, {"e2", q(2, 3)}, {"e9", q(2, 3)}, {"e3", q(1, 2)},
                                {"e7", q(1, 2)}, {"e4", q(1, 3)}, {"e8", q(1, 3)}, {"e5", q(1, 6)}};
  db.normalised_table["III*"] = {{"e1", q(3, 4)}, {"e8", q(3, 4)}, {"e2", q(1, 2)}, {"e5", q(1, 2)},
                                 {"e7", q(1, 2)}, {"e3", q(1, 4)}, {"e6", q(1, 4)}};
  db.normalised_table["IV*"] = {{"e1", q(2, 3)}, {"e3", q(2, 3)}, {"e5", q(2, 3)},
                                {"e2", q(1, 3)}, {"e4", q(1, 3)}, {"e6", q(1, 3)}};

  db.multiplicity_bound = {{"I0*", 2}, {"Ib*", 2}, {"II*", 6}, {"III*", 4}, {"IV*", 3}};

  db.pullback_table["II"] = {{"Y_1", q(1, 3)}};
  db.pullback_table["III"] = {{"Y_{1,2}", q(1, 2)}};
  db.pullback_table["IV"] = {{"Y_{1,2,3}", q(1, 2)}};
  db.pullback_table["I0*"] = {{"Y_{1,2}", q(1, 2)}, {"Y_{1,3}", q(1, 2)}, {"Y_{1,4}", q(1, 2)}, {"Y_{1,5}", q(1, 2)}};
  db.pullback_table["II*"] = {{"Y_{1,2}", q(3, 2)}, {"Y_{2,3}", q(7, 6)}, {"Y_{3,4}", q(5, 6)},
                              {"Y_{4,5}", q(1, 2)}, {"Y_{6,7}", q(1, 2)}, {"Y_{6,8}", q(1, 3)},
                              {"Y_{5,6}", q(1, 6)}, {"Y_{8,9}", q(1, 1)}};
  db.pullback_table["III*"] = {{"Y_{1,2}", q(5, 4)}, {"Y_{7,8}", q(5, 4)}, {"Y_{2,3}", q(3, 4)},
                               {"Y_{6,7}", q(3, 4)}, {"Y_{4,5}", q(1, 2)}, {"Y_{3,4}", q(1, 4)},
                               {"Y_{4,6}", q(1, 4)}};
  db.pullback_table["IV*"] = {{"Y_{1,2}", q(1, 1)}, {"Y_{3,4}", q(1, 1)}, {"Y_{5,6}", q(1, 1)},
                              {"Y_{2,7}", q(1, 3)}, {"Y_{4,7}", q(1, 3)}, {"Y_{6,7}", q(1, 3)}};

  // The cusp and tacnode entries do not follow from the blow-up of the
  // tabulated ideals; the oracle values are 3/2 * 1/6 and 2 * 2/3 * 1/4.
  db.documented_discrepancies["II"] = {{"Y_1", q(1, 3), q(1, 4)}};
  db.documented_discrepancies["III"] = {{"Y_{1,2}", q(1, 2), q(1, 3)}};
  return db;
}

/// I_b (b >= 1) with every component of multiplicity m.
inline FibreModel cycle_model(KodairaType t) {
  FibreModel f;
  f.type = t;
  const int b = t.b, m = t.m;
  if (b == 0) {
    f.components = {Component{"e1", m, Rational(0), 1}};
    return f;
  }
  if (b == 1) {
    f.components = {rational("e1", m, 0)};
    f.points = {FibrePoint{{"e1", "e1"}, 1, "x*y", {"x", "y"}, {BranchGerm{{"e1"}, "x"}, BranchGerm{{"e1"}, "y"}}}};
    return f;
  }
  for (int i = 1; i <= b; ++i) f.components.push_back(rational("e" + std::to_string(i), m));
  for (int i = 1; i <= b; ++i) {
    int j = i % b + 1;
    f.points.push_back(crossing("e" + std::to_string(i), "e" + std::to_string(j)));
  }
  return f;
}

/// I_b^*: a chain e1..e(b+1) of double curves, reduced tails e(b+2), e(b+3)
/// on e1 and e(b+4), e(b+5) on e(b+1).
inline FibreModel dihedral_model(KodairaType t) {
  const int b = t.b;
  std::vector<int> mult(b + 1, 2);
  mult.insert(mult.end(), {1, 1, 1, 1});
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= b; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(1, b + 2);
  edges.emplace_back(1, b + 3);
  edges.emplace_back(b + 1, b + 4);
  edges.emplace_back(b + 1, b + 5);
  return tree_model(t, mult, edges);
}

}  // namespace detail

inline const KodairaDatabase& KodairaDatabase::builtin() {
  static const KodairaDatabase db = detail::make_builtin();
  return db;
}

inline int euler_number(const KodairaType& t, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  t.validate();
  if (t.family == Family::I) return t.b + db.euler_offset_I;
  if (t.family == Family::I_star && t.b > 0) return t.b + db.euler_offset_I_star;
  auto it = db.euler.find(t.base_name());
  if (it == db.euler.end()) throw LookupError("no Euler number stored for " + t.base_name());
  return it->second;
}

inline FibreModel fibre_model(const KodairaType& t, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  t.validate();
  FibreModel f;
  if (t.family == Family::I)
    f = detail::cycle_model(t);
  else if (t.family == Family::I_star && t.b > 0)
    f = detail::dihedral_model(t);
  else {
    auto it = db.models.find(t.base_name());
    if (it == db.models.end()) throw LookupError("no fibre model stored for " + t.base_name());
    f = it->second;
  }
  f.type = t;
  f.euler = euler_number(t, db);
  return f;
}

/// Euler number of the reduced configuration by inclusion-exclusion:
/// sum of normalisation Euler numbers minus (branches - 1) per singular point.
inline int euler_from_configuration(const FibreModel& f) {
  int e = 0;
  for (const auto& c : f.components) e += 2 - 2 * c.genus;
  for (const auto& p : f.points) e -= static_cast<int>(p.branches.size()) - 1;
  return e;
}

/// Normalised fibre: 1 - (1 - e/12) nu_i on each component of a non-multiple
/// fibre, (e/12) m on each component of a multiple fibre.
inline DivisorVec normalized_fibre(const KodairaType& t, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  FibreModel f = fibre_model(t, db);
  const Rational e12 = Rational(f.euler) / Rational(12);
  DivisorVec d;
  for (const auto& c : f.components) {
    if (t.is_multiple())
      d.set(c.id, e12 * Rational(t.m));
    else
      d.set(c.id, Rational(1) - (Rational(1) - e12) * Rational(c.multiplicity));
  }
  return d;
}

/// Whether normalized_fibre(t) is covered by the stored table rather than
/// extrapolated from the closed form.
inline bool normalised_fibre_tabulated(const KodairaType& t) {
  const auto& types = isotrivial_singular_types();
  return std::find(types.begin(), types.end(), t) != types.end();
}

struct GammaPoint {
  std::vector<std::string> location;  // incident components, sorted, without repeats
  Ideal ideal;
};

inline std::vector<std::string> point_components(const FibrePoint& p) {
  std::set<std::string> s(p.branches.begin(), p.branches.end());
  std::vector<std::string> v(s.begin(), s.end());
  std::sort(v.begin(), v.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return v;
}

inline std::vector<GammaPoint> gamma_points(const KodairaType& t, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  FibreModel f = fibre_model(t, db);
  std::vector<GammaPoint> out;
  for (const auto& p : f.points) out.push_back({point_components(p), Ideal::parse(p.gamma_ideal)});
  return out;
}

/// Exceptional curve name over a point: "Y_1" for one component,
/// "Y_{1,2}" for several.
inline std::string exceptional_id(const FibrePoint& p) {
  auto comps = point_components(p);
  auto number = [](const std::string& id) { return id.size() > 1 && id[0] == 'e' ? id.substr(1) : id; };
  if (comps.size() == 1) return "Y_" + number(comps[0]);
  std::string s = "Y_{";
  for (std::size_t i = 0; i < comps.size(); ++i) s += (i ? "," : "") + number(comps[i]);
  return s + "}";
}

}  // namespace kodaira
