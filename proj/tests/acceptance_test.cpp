// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace kodaira;

namespace {

KodairaType T(const std::string& s) { return KodairaType::parse(s); }

template <class A>
std::string show(const A& a) {
  std::ostringstream os;
  os << a;
  return os.str();
}
std::string show(const DivisorVec& d) { return d.str(); }

// Collects mismatches; a criterion passes when none were recorded.
struct Check {
  std::vector<std::string> problems;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    if (got == want) return;
    problems.push_back(what + ": got " + show(got) + ", want " + show(want));
  }
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, double limit_seconds,
               const std::function<void(Check&)>& body) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds)
    c.problems.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(limit_seconds) + " s");
  bool ok = c.problems.empty();
  if (!ok) ++failures;
  std::printf("[%s] %s %s (%.3f s)\n", ok ? "PASS" : "FAIL", id.c_str(), title.c_str(), secs);
  for (const auto& n : c.notes) std::printf("       %s\n", n.c_str());
  std::size_t shown = 0;
  for (const auto& p : c.problems) {
    if (++shown > 20) {
      std::printf("       ... %zu more\n", c.problems.size() - 20);
      break;
    }
    std::printf("       %s\n", p.c_str());
  }
}

// Reference Euler numbers of the isotrivial types.
const std::map<std::string, int> kReferenceEuler = {{"II", 2},  {"III", 3},  {"IV", 4}, {"I0*", 6},
                                                    {"II*", 10}, {"III*", 9}, {"IV*", 8}};

const std::map<std::string, std::string> kReferenceNormalised = {
    {"II", "1/6*e1"},
    {"III", "1/4*e1 + 1/4*e2"},
    {"IV", "1/3*e1 + 1/3*e2 + 1/3*e3"},
    {"I0*", "1/2*e2 + 1/2*e3 + 1/2*e4 + 1/2*e5"},
    {"II*", "5/6*e1 + 2/3*e2 + 2/3*e9 + 1/2*e3 + 1/2*e7 + 1/3*e4 + 1/3*e8 + 1/6*e5"},
    {"III*", "3/4*e1 + 3/4*e8 + 1/2*e2 + 1/2*e5 + 1/2*e7 + 1/4*e3 + 1/4*e6"},
    {"IV*", "2/3*e1 + 2/3*e3 + 2/3*e5 + 1/3*e2 + 1/3*e4 + 1/3*e6"},
};

const std::map<std::string, std::string> kReferencePullback = {
    {"II", "1/3*Y_1"},
    {"III", "1/2*Y_{1,2}"},
    {"IV", "1/2*Y_{1,2,3}"},
    {"I0*", "1/2*Y_{1,2} + 1/2*Y_{1,3} + 1/2*Y_{1,4} + 1/2*Y_{1,5}"},
    {"II*", "3/2*Y_{1,2} + 7/6*Y_{2,3} + 5/6*Y_{3,4} + 1/2*Y_{4,5} + 1/2*Y_{6,7} + 1/3*Y_{6,8} + 1/6*Y_{5,6} + "
            "Y_{8,9}"},
    {"III*", "5/4*Y_{1,2} + 5/4*Y_{7,8} + 3/4*Y_{2,3} + 3/4*Y_{6,7} + 1/2*Y_{4,5} + 1/4*Y_{3,4} + 1/4*Y_{4,6}"},
    {"IV*", "Y_{1,2} + Y_{3,4} + Y_{5,6} + 1/3*Y_{2,7} + 1/3*Y_{4,7} + 1/3*Y_{6,7}"},
};

// Euler number by inclusion-exclusion on the dual graph: each rational
// component contributes 2, an elliptic one 0, and a point where k branches
// meet removes k - 1.
int graph_euler(const FibreModel& f) {
  int e = 0;
  for (const auto& c : f.components) e += c.genus == 1 ? 0 : 2;
  for (const auto& p : f.points) e -= static_cast<int>(p.branches.size()) - 1;
  return e;
}

std::vector<KodairaType> lattice_types() {
  std::vector<KodairaType> out(isotrivial_singular_types());
  for (int b = 1; b <= 10; ++b) {
    out.push_back(KodairaType::I(b));
    out.push_back(KodairaType::I_star(b));
  }
  return out;
}

void ac1(Check& c) {
  for (const auto& [name, text] : kReferenceNormalised) {
    KodairaType t = T(name);
    DivisorVec got = normalized_fibre(t);
    c.equal(got, DivisorVec::parse(text), name + " normalised fibre");
    FibreModel f = fibre_model(t);
    for (const auto& comp : f.components) {
      oracle::Frac closed = oracle::Frac(1) - (oracle::Frac(1) - oracle::Frac(kReferenceEuler.at(name), 12)) *
                                                  oracle::Frac(comp.multiplicity);
      c.expect(closed.matches(got[comp.id]), name + "/" + comp.id + " differs from the closed form");
    }
  }
}

void ac2(Check& c) {
  std::map<std::string, int> expected(kReferenceEuler);
  for (int b = 1; b <= 10; ++b) {
    expected["I" + std::to_string(b)] = b;
    expected["I" + std::to_string(b) + "*"] = b + 6;
  }
  for (int m = 2; m <= 6; ++m) expected[std::to_string(m) + "I0"] = 0;
  expected["I0"] = 0;
  for (const auto& [name, e] : expected) {
    KodairaType t = T(name);
    c.equal(euler_number(t), e, name + " stored Euler number");
    c.equal(graph_euler(fibre_model(t)), e, name + " dual-graph Euler number");
  }
  std::vector<int> starred;
  for (std::string s : {"I0*", "I1*", "II*", "III*", "IV*"}) starred.push_back(euler_number(T(s)));
  c.expect(starred == std::vector<int>{6, 7, 10, 9, 8}, "starred list 6, b+6, 10, 9, 8");
}

void ac3(Check& c) {
  const std::vector<std::string> vars{"x", "y", "b"};
  const std::vector<Rational> point{0, 0, 1};
  c.equal(colength(Ideal::parse({"y^2 - x^2", "1 - b", "y - x", "x^2"}, vars), point), 2u, "first chart length");
  c.equal(colength(Ideal::parse({"y^2 - x^2", "1 - b", "y + x", "x^2"}, vars), point), 2u, "second chart length");
  c.equal(colength(Ideal::parse({"y^2 - x^2", "1 - b", "x^2"}, vars), point), 4u, "joint chart length");
  Ideal m = Ideal::parse({"x^2", "y^2"});
  c.equal(samuel_multiplicity(m), 4u, "samuel multiplicity of (x^2, y^2)");
  c.equal(static_cast<long long>(samuel_multiplicity(m)), oracle::monomial_samuel({{2, 0}, {0, 2}}),
          "samuel multiplicity vs Hilbert-Samuel count");
  Rational t = pullback_coefficient("y - x", m);
  c.equal(t, Rational(1, 2), "pullback coefficient of a line through (x^2, y^2)");
  c.equal(t, oracle::valuative_pullback({{1, 1, Rational(1)}}, m, 4), "pullback coefficient vs valuations");
}

void ac4(Check& c) {
  for (const auto& [name, text] : kReferencePullback) {
    KodairaType t = T(name);
    DivisorVec full = pullback_normalized_fibre(t);
    DivisorVec exceptional;
    for (const auto& [id, v] : full)
      if (id.rfind("Y_", 0) == 0) exceptional.set(id, v);
    c.equal(exceptional, DivisorVec::parse(text), name + " exceptional coefficients");
    CoefficientWitness w = small_coefficient_witness(t);
    c.expect(w.coefficient <= Rational(1, 2), name + " witness coefficient exceeds 1/2");
    c.equal(w.coefficient, full[w.exceptional], name + " witness coefficient is not the table entry");

    DivisorVec n = normalized_fibre(t);
    int reduced = 0;
    for (const auto& pt : fibre_model(t).points) {
      if (!same_ideal(Ideal::parse(pt.gamma_ideal), Ideal::parse({"x", "y"}))) continue;
      ++reduced;
      Rational sum;
      for (const auto& comp : point_components(pt)) sum += n[comp];
      c.equal(full[exceptional_id(pt)], sum, name + " additivity at " + exceptional_id(pt));
    }
    if (t.family == Family::II_star || t.family == Family::III_star || t.family == Family::IV_star ||
        t.family == Family::I_star)
      c.expect(reduced == static_cast<int>(fibre_model(t).points.size()), name + " has non-reduced crossings");
  }
}

const std::vector<std::string> kPool = {"II", "III", "IV",  "I0*", "II*", "III*", "IV*", "I1",
                                        "I2", "I3",  "I4",  "I1*", "I2*", "2I0",  "3I0", "2I2"};

FibreConfiguration random_config(std::mt19937_64& rng) {
  std::vector<KodairaType> ts;
  std::size_t n = 1 + rng() % 4;
  for (std::size_t i = 0; i < n; ++i) ts.push_back(T(kPool[rng() % kPool.size()]));
  return FibreConfiguration::from_types(ts);
}

VerticalDivisor random_divisor(std::mt19937_64& rng, const FibreConfiguration& config, int f_lo, int f_hi) {
  std::uniform_int_distribution<int> coeff(-2, 4), den(1, 3), fc(f_lo, f_hi);
  VerticalDivisor d;
  for (const auto& f : config.fibres()) {
    if (rng() % 4 == 0) continue;
    DivisorVec part;
    for (const auto& cl : f.lattice.classes())
      if (rng() % 2) part.set(cl.id, Rational(coeff(rng), den(rng)));
    d.parts[f.id] = part;
  }
  d.fibre_class_coefficient = Rational(fc(rng), den(rng));
  return d;
}

void ac5(Check& c) {
  std::mt19937_64 rng(20240501);
  int criterion_cases = 0, fired = 0;
  for (; criterion_cases < 300; ++criterion_cases) {
    auto config = random_config(rng);
    auto d = random_divisor(rng, config, -3, 0);
    auto r = sign_criterion(SignCriterionInput::from_divisor(d), config);
    if (r.verdict != SignCriterionVerdict::fires) continue;
    ++fired;
    bool closed_form = oracle::vertical_psef(d, config);
    bool lp = vertical_psef_oracle(d, config).psef;
    c.expect(!closed_form && !lp, "criterion fires on a pseudo-effective divisor");
  }

  int decomposed = 0, rejected = 0, attempts = 0;
  while (decomposed < 250 && attempts < 3000) {
    ++attempts;
    auto config = random_config(rng);
    auto d = random_divisor(rng, config, 0, 4);
    std::vector<std::string> order = config.components();
    std::shuffle(order.begin(), order.end(), rng);
    auto backend = attempts % 2 ? FeasibilityBackend::fourier_motzkin : FeasibilityBackend::simplex;
    bool psef = oracle::vertical_psef(d, config);
    try {
      ZariskiDecomposition z = zariski_decompose(d, config, order, backend);
      ++decomposed;
      c.expect(psef, "decomposed a divisor the closed form calls non-pseudo-effective");
      const Lattice& l = config.lattice();
      c.expect(z.positive + z.negative == d.flatten(), "P + N differs from the input");
      std::vector<std::string> support;
      for (const auto& [id, v] : z.negative) {
        c.expect(v.sign() > 0 && id != "F", "N is not effective on components");
        support.push_back(id);
      }
      if (!support.empty())
        c.expect(oracle::negative_definite(oracle::restrict(l, support)), "N-Gram is not negative definite");
      for (const auto& id : config.components()) {
        Rational p = oracle::pairing(z.positive, DivisorVec{{id, 1}}, l);
        c.expect(p.sign() >= 0, "P meets " + id + " negatively");
        if (z.negative[id].sign() != 0) c.expect(p.is_zero(), "P not orthogonal to " + id);
      }
      c.expect(z.certificates.all(), "library certificates disagree");
    } catch (const NotPseudoEffectiveError&) {
      ++rejected;
      c.expect(!psef, "rejected a pseudo-effective divisor");
    }
  }
  c.expect(criterion_cases >= 200 && decomposed >= 200, "fewer than 200 cases");
  c.notes.push_back(std::to_string(criterion_cases) + " criterion cases (" + std::to_string(fired) + " fired), " +
                    std::to_string(decomposed) + " decompositions, " + std::to_string(rejected) +
                    " non-psef inputs rejected");
}

void ac6(Check& c) {
  for (const auto& t : lattice_types()) {
    FibreModel f = fibre_model(t);
    Lattice l = f.lattice();
    const std::string n = t.name();
    std::vector<std::string> ids = f.component_ids();
    DivisorVec nu = f.multiplicity_vector();

    auto d = definiteness(l);
    c.expect(d.kind == Definiteness::negative_semidefinite, n + " is not negative semidefinite");
    c.expect(d.kernel.size() == 1 && d.kernel[0] == nu, n + " kernel is not the multiplicity vector");
    for (const auto& id : ids) c.expect(oracle::pairing(nu, DivisorVec{{id, 1}}, l).is_zero(), n + " nu.E != 0");
    c.expect(oracle::determinant(oracle::restrict(l, ids)).is_zero(), n + " Gram is nonsingular");

    // Principal submatrices of a negative definite matrix are negative
    // definite, so the maximal proper subsets cover every proper one.
    for (std::size_t skip = 0; skip < ids.size(); ++skip) {
      std::vector<std::string> sub;
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (i != skip) sub.push_back(ids[i]);
      if (sub.empty()) continue;
      c.expect(oracle::negative_definite(oracle::restrict(l, sub)), n + " without " + ids[skip] + " not definite");
      c.expect(definiteness(l, sub).kind == Definiteness::negative_definite,
               n + " without " + ids[skip] + " not definite (library)");
    }

    bool minus_two = std::all_of(f.components.begin(), f.components.end(),
                                 [](const Component& x) { return x.self_intersection == Rational(-2); });
    if (!minus_two) continue;
    std::map<std::string, int> neighbours;
    for (const auto& e : f.edges()) {
      neighbours[e.a] += e.multiplicity * f.component(e.b).multiplicity;
      neighbours[e.b] += e.multiplicity * f.component(e.a).multiplicity;
    }
    for (const auto& comp : f.components)
      c.equal(neighbours[comp.id], 2 * comp.multiplicity, n + "/" + comp.id + " affine relation");
  }
}

FibrationSpec spec(int g, std::vector<std::string> fibres) {
  FibrationSpec s;
  s.base_genus = g;
  for (const auto& f : fibres) s.fibres.push_back(T(f));
  s.validate();
  return s;
}

void golden(Check& c, const std::string& name, const FibrationSpec& s, std::optional<int> chi, Kappa kappa,
            TangentVerdict verdict, std::optional<int> kappa_pt) {
  InvariantsReport r = make_report(s);
  if (chi) c.equal(r.chi, *chi, name + " chi");
  c.equal(to_string(r.kappa), to_string(kappa), name + " kappa");
  c.equal(to_string(r.tangent_psef), to_string(verdict), name + " tangent verdict");
  if (kappa_pt) c.expect(r.kappa_pt == kappa_pt, name + " kappa(P(T_S)) should be " + std::to_string(*kappa_pt));
}

void ac7(Check& c) {
  using K = Kappa;
  using V = TangentVerdict;
  golden(c, "g=1 smooth", spec(1, {}), 0, K::zero, V::psef, 1);
  golden(c, "g=0 24xI1", spec(0, std::vector<std::string>(24, "I1")), 2, K::zero, V::not_psef, std::nullopt);
  golden(c, "g=2 smooth", spec(2, {}), std::nullopt, K::one, V::psef, 0);
  golden(c, "g=0 12xI1", spec(0, std::vector<std::string>(12, "I1")), std::nullopt, K::negative_infinity,
         V::out_of_scope, std::nullopt);
  golden(c, "g=0 3x2I0", spec(0, {"2I0", "2I0", "2I0"}), std::nullopt, K::negative_infinity, V::out_of_scope,
         std::nullopt);
  golden(c, "g=0 4x2I0", spec(0, {"2I0", "2I0", "2I0", "2I0"}), std::nullopt, K::zero, V::psef, std::nullopt);
  golden(c, "g=0 5x2I0", spec(0, {"2I0", "2I0", "2I0", "2I0", "2I0"}), std::nullopt, K::one, V::psef, std::nullopt);

  FibrationSpec iso = spec(1, {"II*", "II"});
  InvariantsReport r = make_report(iso);
  c.equal(r.c2, 12, "g=1 II*+II c2");
  c.equal(to_string(r.kappa), "1", "g=1 II*+II kappa");
  c.equal(to_string(r.tangent_psef), "not-psef", "g=1 II*+II verdict");
  YRestrictionResult y = y_restriction_verdict(iso);
  c.expect(y.not_psef(), "y_restriction certificate does not fire");
  c.expect(!y.oracle.psef, "oracle finds the restricted class pseudo-effective");
  c.expect(!oracle::vertical_psef(y.divisor, y.configuration), "closed form finds the restricted class psef");
  c.expect(r.y_restriction && r.y_restriction->criterion == "fires", "report carries no certificate");
}

void ac8(Check& c) {
  const std::vector<std::string> pool = {"2I0", "3I0", "I1", "I2", "II", "IV", "I0*", "I1*", "II*", "IV*"};
  std::size_t specs = 0, psef = 0, y_checked = 0;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, int)> walk = [&](std::size_t from, int g) {
    FibrationSpec s;
    s.base_genus = g;
    int c2 = 0;
    oracle::Frac delta(2 * g - 2);
    bool smooth = true;
    for (std::size_t i : pick) {
      KodairaType t = T(pool[i]);
      s.fibres.push_back(t);
      int e = graph_euler(fibre_model(t));
      c2 += e;
      smooth = smooth && e == 0;
      delta = delta + oracle::Frac(1) - oracle::Frac(1, t.m);
    }
    if (c2 % 12 == 0) {
      delta = delta + oracle::Frac(c2 / 12);
      bool kappa_nonneg = !(delta < oracle::Frac(0));
      c.expect(kappa_nonneg == (kodaira_dimension(s) != Kappa::negative_infinity), "kappa sign mismatch");
      if (kappa_nonneg) {
        ++specs;
        const std::string name = spec_json(s).dump();
        bool v = tangent_psef_verdict(s) == TangentVerdict::psef;
        psef += v;
        c.equal(chern2(s), c2, name + " c2");
        c.expect(v == (c2 == 0), name + ": verdict vs c2 = 0");
        c.expect((c2 == 0) == smooth, name + ": c2 = 0 vs smooth reduction");
        c.expect(smooth == is_almost_smooth(s), name + ": almost smooth");
        if (!v && validate_isotrivial_consistency(s) && kodaira_dimension(s) == Kappa::one && s.fibres.size() <= 3) {
          ++y_checked;
          YRestrictionResult y = y_restriction_verdict(s);
          c.expect(y.not_psef() && !y.oracle.psef && !y.oracle_recomputed.psef,
                   name + ": restriction certificate missing");
        }
      }
    }
    if (pick.size() == 6) return;
    for (std::size_t i = from; i < pool.size(); ++i) {
      pick.push_back(i);
      walk(i, g);
      pick.pop_back();
    }
  };
  for (int g = 0; g <= 3; ++g) walk(0, g);
  c.expect(specs >= 500, "fewer than 500 specs");
  c.notes.push_back(std::to_string(specs) + " specs with kappa >= 0 (" + std::to_string(psef) + " psef), " +
                    std::to_string(y_checked) + " restriction certificates");
}

const std::vector<std::string> kFaults = {
    "euler/II*=9",          "euler/III=4",           "euler/IV*=7",           "euler/Ib=1",
    "euler/Ib*=5",          "normalised/II*/e6=1/12", "normalised/IV/e1=1/2",  "normalised/I0*/e1=1/2",
    "nu/II*/e6=5",          "nu/III*/e4=3",          "nu/IV*/e7=2",           "self/III/e1=-1",
    "self/I0*/e2=-3",       "bound/II*=5",           "bound/IV*=2",           "pullback/II*/Y_{1,2}=1",
    "pullback/I0*/Y_{1,3}=1", "pullback/III*/Y_{3,4}=1/2", "pullback/IV/Y_{1,2,3}=1/3", "gamma/II=x^3,y",
    "gamma/IV=x,y",         "gamma/II*/3=x^2,y",     "pair/III/0=1",          "equation/II/0=y^2-x^5",
    "equation/IV/0=y^3-x^2", "germ/III/0/1=y-x^3",
};

int cli_exit(const std::string& args) {
  std::string cmd = std::string(KODAIRA_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void ac9(Check& c) {
  c.expect(!verify_tables().failed(), "clean tables fail verification");
  c.equal(cli_exit("verify-tables"), 0, "clean verify-tables exit code");
  for (const auto& fault : kFaults) {
    KodairaDatabase db = KodairaDatabase::builtin();
    apply_perturbation(db, fault);
    c.expect(verify_tables(db).failed(), fault + " not detected");
    c.equal(cli_exit("verify-tables --perturb '" + fault + "'"), 1, fault + " exit code");
  }
  c.notes.push_back(std::to_string(kFaults.size()) + " injected faults");
}

}  // namespace

int main() {
  criterion("AC1", "normalised fibre table and closed form", 1.0, ac1);
  criterion("AC2", "Euler numbers against dual-graph inclusion-exclusion", 0, ac2);
  criterion("AC3", "tacnode chart lengths, Samuel multiplicity, t = 1/2", 0, ac3);
  criterion("AC4", "pulled-back fibre table, small witness, additivity", 0, ac4);
  criterion("AC5", "criterion soundness and Zariski certificates on random inputs", 30.0, ac5);
  criterion("AC6", "fibre lattice definiteness, kernel, affine relation", 0, ac6);
  criterion("AC7", "surface pipeline golden cases", 0, ac7);
  criterion("AC8", "tangent verdict vs c2 = 0 vs almost smooth on enumerated specs", 0, ac8);
  criterion("AC9", "fault injection into stored tables", 0, ac9);
  return failures == 0 ? 0 : 1;
}
