#pragma once

// Vertical divisors on a fibred surface: an exact pseudo-effectivity oracle,
// Zariski decomposition, and the one-directional fibre-sign criterion.
//
// A vertical class is pseudo-effective iff it is numerically t F plus an
// effective combination of fibre components with t >= 0. Within fibre c
// the only numerical relation is (multiplicity vector) = F, so the question
// is linear feasibility in one shift variable lambda_c per fibre:
//
//   nu_i lambda_c <= D_{c,i}          for every component i of fibre c
//   -sum_c lambda_c <= d_F            (t = d_F + sum_c lambda_c >= 0)

#include "kodaira/kodaira_db.hpp"
#include "kodaira/lattice.hpp"
#include "kodaira/linear_feasibility.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kodaira {

/// One fibre of a configuration: local component lattice plus the
/// multiplicity vector (the fibre class in local ids).
struct ConfigFibre {
  std::string id;
  std::string label;  // e.g. the Kodaira symbol
  Lattice lattice;
  DivisorVec multiplicities;
};

class FibreConfiguration {
 public:
  FibreConfiguration() = default;
  explicit FibreConfiguration(std::vector<ConfigFibre> fibres) : fibres_(std::move(fibres)) { build(); }

  /// Fibres named c1, c2, ... in the given order.
  static FibreConfiguration from_types(const std::vector<KodairaType>& types,
                                       const KodairaDatabase& db = KodairaDatabase::builtin()) {
    std::vector<ConfigFibre> fibres;
    for (std::size_t i = 0; i < types.size(); ++i) {
      FibreModel f = fibre_model(types[i], db);
      fibres.push_back({"c" + std::to_string(i + 1), types[i].name(), f.lattice(), f.multiplicity_vector()});
    }
    return FibreConfiguration(std::move(fibres));
  }

  static std::string qualify(const std::string& fibre, const std::string& component) {
    return fibre + ":" + component;
  }
  static constexpr const char* general_fibre = "F";

  const std::vector<ConfigFibre>& fibres() const { return fibres_; }
  const ConfigFibre& fibre(const std::string& id) const {
    for (const auto& f : fibres_)
      if (f.id == id) return f;
    throw LookupError("configuration has no fibre '" + id + "'");
  }
  bool has_fibre(const std::string& id) const {
    return std::any_of(fibres_.begin(), fibres_.end(), [&](const ConfigFibre& f) { return f.id == id; });
  }

  /// All fibre components plus F, qualified ids.
  const Lattice& lattice() const { return lattice_; }
  /// Qualified ids of the fibre components (F excluded), configuration order.
  const std::vector<std::string>& components() const { return components_; }

 private:
  void build() {
    std::vector<CurveClass> cls;
    for (const auto& f : fibres_)
      for (const auto& c : f.lattice.classes()) {
        cls.push_back({qualify(f.id, c.id), c.kind});
        components_.push_back(cls.back().id);
      }
    cls.push_back({general_fibre, CurveKind::general_fibre});
    Matrix g(cls.size(), std::vector<Rational>(cls.size()));
    std::size_t offset = 0;
    for (const auto& f : fibres_) {
      const auto& lg = f.lattice.gram();
      for (std::size_t i = 0; i < lg.size(); ++i)
        for (std::size_t j = 0; j < lg.size(); ++j) g[offset + i][offset + j] = lg[i][j];
      offset += lg.size();
    }
    lattice_ = Lattice(std::move(cls), std::move(g));
  }

  std::vector<ConfigFibre> fibres_;
  Lattice lattice_;
  std::vector<std::string> components_;
};

/// Per-fibre parts in local component ids, plus the coefficient of F.
struct VerticalDivisor {
  std::map<std::string, DivisorVec> parts;
  Rational fibre_class_coefficient;

  /// Flattened with qualified ids and "F".
  DivisorVec flatten() const {
    DivisorVec d;
    for (const auto& [fibre, part] : parts)
      for (const auto& [id, c] : part) d.add(FibreConfiguration::qualify(fibre, id), c);
    d.add(FibreConfiguration::general_fibre, fibre_class_coefficient);
    return d;
  }

  void validate(const FibreConfiguration& config) const {
    for (const auto& [fibre, part] : parts) {
      const auto& f = config.fibre(fibre);
      for (const auto& [id, c] : part)
        if (!f.lattice.contains(id)) throw LookupError("fibre " + fibre + " has no component '" + id + "'");
    }
  }
};

struct PsefWitness {
  Rational fibre_class_coefficient;             // t >= 0
  std::map<std::string, DivisorVec> effective;  // N_c >= 0 per fibre, local ids
};

struct PsefCertificate {
  std::vector<std::pair<std::string, Rational>> multipliers;  // Farkas combination, nonzero rows only
};

struct PsefResult {
  bool psef = false;
  PsefWitness witness;          // psef case
  PsefCertificate certificate;  // not-psef case
  LinearSystem system;
  std::vector<Rational> shifts;  // lambda_c per fibre, psef case
};

namespace detail {

inline LinearSystem psef_system(const VerticalDivisor& d, const FibreConfiguration& config) {
  LinearSystem s;
  s.variables = config.fibres().size();
  for (std::size_t k = 0; k < config.fibres().size(); ++k) {
    const auto& f = config.fibres()[k];
    auto it = d.parts.find(f.id);
    for (const auto& cls : f.lattice.classes()) {
      std::vector<Rational> row(s.variables);
      row[k] = f.multiplicities[cls.id];
      Rational rhs = it == d.parts.end() ? Rational(0) : it->second[cls.id];
      s.add(std::move(row), rhs, FibreConfiguration::qualify(f.id, cls.id) + " >= 0");
    }
  }
  std::vector<Rational> row(s.variables, Rational(-1));
  s.add(std::move(row), d.fibre_class_coefficient, "F >= 0");
  return s;
}

}  // namespace detail

/// Exact pseudo-effectivity of a vertical class. The witness absorbs all of
/// t into the first fibre (configuration order) on which d is supported.
inline PsefResult vertical_psef_oracle(const VerticalDivisor& d, const FibreConfiguration& config,
                                       FeasibilityBackend backend = FeasibilityBackend::fourier_motzkin) {
  d.validate(config);
  PsefResult out;
  out.system = detail::psef_system(d, config);
  FeasibilityResult fr = solve_feasibility(out.system, backend);
  if (!fr.feasible) {
    for (std::size_t r = 0; r < fr.farkas.size(); ++r)
      if (!fr.farkas[r].is_zero()) out.certificate.multipliers.emplace_back(out.system.labels[r], fr.farkas[r]);
    return out;
  }
  out.psef = true;
  std::vector<Rational> lambda = fr.point;
  Rational t = d.fibre_class_coefficient;
  for (const auto& l : lambda) t += l;
  for (std::size_t k = 0; k < config.fibres().size(); ++k) {
    auto it = d.parts.find(config.fibres()[k].id);
    if (it != d.parts.end() && !it->second.empty()) {
      lambda[k] -= t;
      t = 0;
      break;
    }
  }
  out.shifts = lambda;
  out.witness.fibre_class_coefficient = t;
  for (std::size_t k = 0; k < config.fibres().size(); ++k) {
    const auto& f = config.fibres()[k];
    auto it = d.parts.find(f.id);
    DivisorVec n = it == d.parts.end() ? DivisorVec{} : it->second;
    n -= lambda[k] * f.multiplicities;
    if (!n.empty()) out.witness.effective[f.id] = n;
  }
  return out;
}

/// Checks that the witness is effective and numerically equal to d.
inline bool witness_reproduces(const PsefWitness& w, const VerticalDivisor& d, const FibreConfiguration& config) {
  if (w.fibre_class_coefficient.sign() < 0) return false;
  Rational shift_total;
  for (const auto& f : config.fibres()) {
    auto wi = w.effective.find(f.id);
    DivisorVec n = wi == w.effective.end() ? DivisorVec{} : wi->second;
    for (const auto& [id, c] : n)
      if (c.sign() < 0 || !f.lattice.contains(id)) return false;
    auto di = d.parts.find(f.id);
    DivisorVec diff = (di == d.parts.end() ? DivisorVec{} : di->second) - n;
    // diff must be lambda * multiplicities
    if (diff.empty()) continue;
    const auto& first = *f.multiplicities.begin();
    Rational lambda = diff[first.first] / first.second;
    if (diff != lambda * f.multiplicities) return false;
    shift_total += lambda;
  }
  return w.fibre_class_coefficient == d.fibre_class_coefficient + shift_total;
}

class NotPseudoEffectiveError : public std::runtime_error {
 public:
  NotPseudoEffectiveError(const std::string& what, PsefCertificate cert)
      : std::runtime_error(what), certificate_(std::move(cert)) {}
  const PsefCertificate& certificate() const { return certificate_; }

 private:
  PsefCertificate certificate_;
};

struct ZariskiCertificates {
  bool sums_to_input = false;
  bool negative_effective = false;
  bool negative_definite = false;
  bool nef_on_components = false;
  bool orthogonal = false;

  bool all() const { return sums_to_input && negative_effective && negative_definite && nef_on_components && orthogonal; }
};

struct ZariskiDecomposition {
  DivisorVec positive;  // qualified ids, includes F
  DivisorVec negative;  // qualified ids, fibre components only
  ZariskiCertificates certificates;
};

/// Recomputes every certificate of (P, N) against the input.
inline ZariskiCertificates check_certificates(const DivisorVec& positive, const DivisorVec& negative,
                                              const DivisorVec& input, const FibreConfiguration& config) {
  const Lattice& l = config.lattice();
  ZariskiCertificates c;
  c.sums_to_input = positive + negative == input;
  c.negative_effective = std::all_of(negative.begin(), negative.end(), [](const auto& kv) {
    return kv.second.sign() > 0 && kv.first != FibreConfiguration::general_fibre;
  });
  std::vector<std::string> support;
  for (const auto& [id, coeff] : negative) support.push_back(id);
  c.negative_definite =
      support.empty() || definiteness(l, support).kind == Definiteness::negative_definite;
  c.nef_on_components = true;
  for (const auto& id : config.components())
    if (intersect(positive, DivisorVec{{id, 1}}, l).sign() < 0) c.nef_on_components = false;
  c.orthogonal = true;
  for (const auto& id : support)
    if (!intersect(positive, DivisorVec{{id, 1}}, l).is_zero()) c.orthogonal = false;
  return c;
}

/// Fujita-style iteration: repeatedly add the first component (in
/// `processing_order`, default configuration order) that meets the current
/// positive part negatively, then re-solve the orthogonality system on the
/// grown support.
inline ZariskiDecomposition zariski_decompose(const VerticalDivisor& d, const FibreConfiguration& config,
                                              const std::vector<std::string>& processing_order = {},
                                              FeasibilityBackend backend = FeasibilityBackend::fourier_motzkin) {
  PsefResult oracle = vertical_psef_oracle(d, config, backend);
  if (!oracle.psef) throw NotPseudoEffectiveError("divisor is not pseudo-effective", oracle.certificate);

  const Lattice& l = config.lattice();
  const DivisorVec input = d.flatten();
  const std::vector<std::string>& order = processing_order.empty() ? config.components() : processing_order;
  if (order.size() != config.components().size())
    throw std::invalid_argument("processing order must list every component exactly once");

  std::vector<std::string> support;
  DivisorVec negative;
  while (true) {
    DivisorVec positive = input - negative;
    std::optional<std::string> grow;
    for (const auto& id : order) {
      if (std::find(support.begin(), support.end(), id) != support.end()) continue;
      if (intersect(positive, DivisorVec{{id, 1}}, l).sign() < 0) {
        grow = id;
        break;
      }
    }
    if (!grow) break;
    support.push_back(*grow);
    if (definiteness(l, support).kind != Definiteness::negative_definite)
      throw std::logic_error("negative support stopped being negative definite on a pseudo-effective input");
    DivisorVec rhs;
    for (const auto& id : support) rhs.set(id, intersect(input, DivisorVec{{id, 1}}, l));
    auto solved = solve_linear(l, support, rhs);
    if (!solved) throw std::logic_error("negative-definite orthogonality system has no solution");
    negative = *solved;
  }
  ZariskiDecomposition z{input - negative, negative, {}};
  z.certificates = check_certificates(z.positive, z.negative, input, config);
  return z;
}

/// Explicit sign split of a fibre part: a >= 0 on `positive`, b > 0 on
/// `negative` (the divisor is positive - negative). Components of the fibre
/// named in neither carry a = 0.
struct SignSplit {
  DivisorVec positive;
  DivisorVec negative;
};

struct SignCriterionInput {
  std::map<std::string, SignSplit> fibres;
  Rational delta;

  /// Splits each fibre part of d by coefficient sign; delta = -(F coefficient).
  static SignCriterionInput from_divisor(const VerticalDivisor& d) {
    SignCriterionInput in;
    for (const auto& [fibre, part] : d.parts) {
      SignSplit s;
      for (const auto& [id, c] : part) {
        if (c.sign() > 0) s.positive.set(id, c);
        if (c.sign() < 0) s.negative.set(id, -c);
      }
      in.fibres[fibre] = s;
    }
    in.delta = -d.fibre_class_coefficient;
    return in;
  }

  /// M - delta F.
  VerticalDivisor divisor() const {
    VerticalDivisor d;
    for (const auto& [fibre, s] : fibres) d.parts[fibre] = s.positive - s.negative;
    d.fibre_class_coefficient = -delta;
    return d;
  }
};

enum class SignCriterionVerdict { fires, not_applicable };

struct SignCriterionResult {
  SignCriterionVerdict verdict = SignCriterionVerdict::not_applicable;
  std::string reason;
  std::vector<std::string> fibres_with_negative_part;
  /// Fibres without negative part, each with a zero-coefficient component.
  std::vector<std::pair<std::string, std::string>> zero_components;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fires (the class M - delta F is not pseudo-effective) when
///  delta = 0: some fibre has a negative part, and every fibre without one
///             has a component with coefficient 0;
///  delta > 0: the second condition alone.
/// Never claims pseudo-effectivity.
inline SignCriterionResult sign_criterion(const SignCriterionInput& in, const FibreConfiguration& config) {
  if (in.delta.sign() < 0) throw ValidationError("delta must be non-negative");
  for (const auto& [fibre, s] : in.fibres) {
    if (!config.has_fibre(fibre)) throw ValidationError("unknown fibre '" + fibre + "'");
    const auto& f = config.fibre(fibre);
    for (const auto& [id, a] : s.positive) {
      if (!f.lattice.contains(id)) throw ValidationError("fibre " + fibre + " has no component '" + id + "'");
      if (a.sign() < 0) throw ValidationError("coefficient a of " + fibre + ":" + id + " is negative");
      if (!s.negative[id].is_zero()) throw ValidationError(fibre + ":" + id + " appears on both sides of the split");
    }
    for (const auto& [id, b] : s.negative) {
      if (!f.lattice.contains(id)) throw ValidationError("fibre " + fibre + " has no component '" + id + "'");
      if (b.sign() <= 0) throw ValidationError("coefficient b of " + fibre + ":" + id + " must be positive");
    }
  }

  SignCriterionResult out;
  if (in.fibres.empty()) {
    out.reason = "no fibres in the support";
    return out;
  }
  bool condition2 = true;
  for (const auto& [fibre, s] : in.fibres) {
    if (!s.negative.empty()) {
      out.fibres_with_negative_part.push_back(fibre);
      continue;
    }
    std::optional<std::string> zero;
    for (const auto& cls : config.fibre(fibre).lattice.classes())
      if (s.positive[cls.id].is_zero()) {
        zero = cls.id;
        break;
      }
    if (zero)
      out.zero_components.emplace_back(fibre, *zero);
    else {
      condition2 = false;
      out.reason = "fibre " + fibre + " is nonnegative with full support";
    }
  }
  const bool condition1 = !out.fibres_with_negative_part.empty();
  if (!condition2) return out;
  if (in.delta.is_zero() && !condition1) {
    out.reason = "delta = 0 and no fibre has a negative part";
    return out;
  }
  out.verdict = SignCriterionVerdict::fires;
  out.reason = in.delta.is_zero() ? "negative part present; nonnegative fibres miss a component"
                                  : "delta > 0; nonnegative fibres miss a component";
  return out;
}

}  // namespace kodaira
