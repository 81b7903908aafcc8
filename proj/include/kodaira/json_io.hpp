#pragma once

// JSON input (fibration specs, vertical divisors) and output for every
// result type. Rationals are always strings "p/q".

#include "kodaira/blowup.hpp"
#include "kodaira/report.hpp"
#include "kodaira/zariski.hpp"

#include <json.hpp>  // nlohmann, vendored

#include <fstream>
#include <sstream>
#include <string>
#include <utility>

namespace kodaira {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return r.str(); }

inline Json to_json(const DivisorVec& d) {
  Json j = Json::object();
  for (const auto& [id, c] : d) j[id] = c.str();
  return j;
}

namespace detail {

inline std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    if (auto p = msg.find("]: "); p != std::string::npos) msg = msg.substr(p + 3);
    if (msg.rfind("parse error", 0) == 0)
      if (auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
    throw SpecError("E_SYNTAX", line_context(text, e.byte == 0 ? 0 : e.byte - 1), msg);
  }
}

inline int integer_field(const Json& j, const std::string& key, const std::string& field, int fallback,
                         const std::string& code) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw SpecError(code, field + "." + key, "expected an integer");
  auto n = v.get<long long>();
  if (n < -1000000 || n > 1000000) throw SpecError(code, field + "." + key, "integer out of range");
  return static_cast<int>(n);
}

inline Rational rational_field(const Json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (!v.is_string()) throw SpecError("E_SYNTAX", field, "expected a rational string \"p/q\"");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    throw SpecError("E_SYNTAX", field, "malformed rational '" + v.get<std::string>() + "'");
  }
}

}  // namespace detail

/// A fibre entry: {"type": "II*"} or {"type": "I", "b": 3, "m": 2}; full
/// symbols such as "I3", "I0*" and "2I0" are accepted as well.
inline KodairaType parse_fibre_type(const Json& j, const std::string& field) {
  if (!j.is_object()) throw SpecError("E_SYNTAX", field, "fibre entry must be an object");
  if (!j.contains("type") || !j.at("type").is_string())
    throw SpecError("E_TYPE", field + ".type", "missing or non-string fibre type");
  const std::string tag = j.at("type").get<std::string>();
  const int b = detail::integer_field(j, "b", field, 0, "E_TYPE");
  const int m = detail::integer_field(j, "m", field, 1, "E_MULT");
  KodairaType t;
  if (tag == "I" || tag == "I*") {
    t = KodairaType{tag == "I" ? Family::I : Family::I_star, b, m};
  } else {
    t = KodairaType::parse(tag, field + ".type");
    if (j.contains("b") && !(t.indexed() && t.b == b))
      throw SpecError("E_TYPE", field + ".b", "index given twice or on a type without index");
    if (j.contains("m")) {
      if (t.m != 1 && t.m != m) throw SpecError("E_MULT", field + ".m", "multiplicity given twice");
      t.m = m;
    }
  }
  t.validate(field);
  return t;
}

inline Json fibre_type_json(const KodairaType& t) {
  Json j = Json::object();
  switch (t.family) {
    case Family::I: j["type"] = "I"; break;
    case Family::I_star: j["type"] = "I*"; break;
    default: j["type"] = t.base_name();
  }
  if (t.indexed()) j["b"] = t.b;
  if (t.m > 1) j["m"] = t.m;
  return j;
}

inline FibrationSpec parse_spec(const std::string& text, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  Json j = detail::parse_json(text);
  if (!j.is_object()) throw SpecError("E_SYNTAX", "", "spec must be a JSON object");
  FibrationSpec s;
  if (!j.contains("base_genus")) throw SpecError("E_GENUS", "base_genus", "missing base genus");
  const Json& g = j.at("base_genus");
  if (!g.is_number_integer()) throw SpecError("E_GENUS", "base_genus", "base genus must be an integer");
  if (g.get<long long>() < 0) throw SpecError("E_GENUS", "base_genus", "base genus must be non-negative");
  if (g.get<long long>() > 1000000) throw SpecError("E_GENUS", "base_genus", "base genus out of range");
  s.base_genus = g.get<int>();
  if (j.contains("fibres")) {
    const Json& fs = j.at("fibres");
    if (!fs.is_array()) throw SpecError("E_SYNTAX", "fibres", "fibres must be an array");
    for (std::size_t i = 0; i < fs.size(); ++i)
      s.fibres.push_back(parse_fibre_type(fs[i], "fibres[" + std::to_string(i) + "]"));
  }
  s.validate(db);
  return s;
}

inline Json spec_json(const FibrationSpec& s) {
  Json j = Json::object();
  j["base_genus"] = s.base_genus;
  j["fibres"] = Json::array();
  for (const auto& f : s.fibres) j["fibres"].push_back(fibre_type_json(f));
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("E_SYNTAX", path, "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline constexpr int kMaxDivisorIndex = 64;

struct DivisorInput {
  FibreConfiguration configuration;
  VerticalDivisor divisor;
};

/// {"fibres": {"c1": {"type": "I0*", "coefficients": {"e1": "-1"}}, ...},
///  "F": "p/q"}; fibres keep file order.
inline DivisorInput parse_divisor(const std::string& text, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  Json j = detail::parse_json(text);
  if (!j.is_object()) throw SpecError("E_SYNTAX", "", "divisor must be a JSON object");
  DivisorInput out;
  std::vector<ConfigFibre> fibres;
  if (j.contains("fibres")) {
    const Json& fs = j.at("fibres");
    if (!fs.is_object()) throw SpecError("E_SYNTAX", "fibres", "fibres must be an object keyed by fibre id");
    for (const auto& [id, entry] : fs.items()) {
      const std::string field = "fibres." + id;
      if (id.empty() || id.find(':') != std::string::npos || id == FibreConfiguration::general_fibre)
        throw SpecError("E_SYNTAX", field, "fibre ids must be nonempty, not 'F', and contain no ':'");
      KodairaType t = parse_fibre_type(entry, field);
      if (t.b > kMaxDivisorIndex)
        throw SpecError("E_TYPE", field, "fibre index above " + std::to_string(kMaxDivisorIndex) + " in a divisor");
      FibreModel f = fibre_model(t, db);
      fibres.push_back({id, t.name(), f.lattice(), f.multiplicity_vector()});
      DivisorVec part;
      if (entry.contains("coefficients")) {
        const Json& cs = entry.at("coefficients");
        if (!cs.is_object()) throw SpecError("E_SYNTAX", field + ".coefficients", "expected an object");
        for (const auto& [cid, value] : cs.items()) {
          if (!f.has_component(cid))
            throw SpecError("E_COMPONENT", field + ".coefficients." + cid,
                            "fibre " + t.name() + " has no component '" + cid + "'");
          part.add(cid, detail::rational_field(value, field + ".coefficients." + cid));
        }
      }
      out.divisor.parts[id] = part;
    }
  }
  if (j.contains("F")) out.divisor.fibre_class_coefficient = detail::rational_field(j.at("F"), "F");
  out.configuration = FibreConfiguration(std::move(fibres));
  return out;
}

inline Json divisor_json(const VerticalDivisor& d) {
  Json j = Json::object();
  Json parts = Json::object();
  for (const auto& [fibre, part] : d.parts) parts[fibre] = to_json(part);
  j["fibres"] = parts;
  j["F"] = d.fibre_class_coefficient.str();
  return j;
}

inline Json to_json(const FibreModel& f) {
  Json j = Json::object();
  j["type"] = f.type.name();
  j["euler"] = f.euler;
  j["euler_from_configuration"] = euler_from_configuration(f);
  Json comps = Json::array();
  for (const auto& c : f.components) {
    Json cj = Json::object();
    cj["id"] = c.id;
    cj["multiplicity"] = c.multiplicity;
    cj["self_intersection"] = c.self_intersection.str();
    cj["genus"] = c.genus;
    comps.push_back(cj);
  }
  j["components"] = comps;
  Json edges = Json::array();
  for (const auto& e : f.edges()) edges.push_back(Json::array({e.a, e.b, e.multiplicity}));
  j["edges"] = edges;
  Lattice l = f.lattice();
  Json gram = Json::array();
  for (const auto& row : l.gram()) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v.str());
    gram.push_back(r);
  }
  j["gram"] = gram;
  Json points = Json::array();
  for (const auto& p : f.points) {
    Json pj = Json::object();
    pj["components"] = point_components(p);
    pj["exceptional"] = exceptional_id(p);
    pj["local_equation"] = p.local_equation;
    pj["ideal"] = p.gamma_ideal;
    points.push_back(pj);
  }
  j["gamma_points"] = points;
  j["normalised_fibre"] = to_json(normalized_fibre(f.type));
  j["normalised_fibre_tabulated"] = normalised_fibre_tabulated(f.type);
  return j;
}

inline Json to_json(const PsefResult& r) {
  Json j = Json::object();
  j["psef"] = r.psef;
  if (r.psef) {
    Json w = Json::object();
    w["F"] = r.witness.fibre_class_coefficient.str();
    Json eff = Json::object();
    for (const auto& [fibre, part] : r.witness.effective) eff[fibre] = to_json(part);
    w["effective"] = eff;
    j["witness"] = w;
  } else {
    Json c = Json::array();
    for (const auto& [label, y] : r.certificate.multipliers) c.push_back(Json::array({label, y.str()}));
    j["farkas_certificate"] = c;
  }
  return j;
}

inline Json to_json(const ZariskiDecomposition& z) {
  Json j = Json::object();
  j["positive"] = to_json(z.positive);
  j["negative"] = to_json(z.negative);
  Json c = Json::object();
  c["sums_to_input"] = z.certificates.sums_to_input;
  c["negative_effective"] = z.certificates.negative_effective;
  c["negative_definite"] = z.certificates.negative_definite;
  c["nef_on_components"] = z.certificates.nef_on_components;
  c["orthogonal"] = z.certificates.orthogonal;
  j["certificates"] = c;
  return j;
}

inline Json to_json(const SignCriterionResult& r) {
  Json j = Json::object();
  j["verdict"] = r.verdict == SignCriterionVerdict::fires ? "fires" : "not-applicable";
  j["reason"] = r.reason;
  j["fibres_with_negative_part"] = r.fibres_with_negative_part;
  Json z = Json::array();
  for (const auto& [fibre, comp] : r.zero_components) z.push_back(Json::array({fibre, comp}));
  j["zero_components"] = z;
  return j;
}

/// {strict: {...}, exceptional: {...}, witness: [component, coefficient]}.
inline Json blowup_json(const KodairaType& t, const KodairaDatabase& db = KodairaDatabase::builtin()) {
  DivisorVec p = pullback_normalized_fibre(t, db);
  DivisorVec o = pullback_normalized_fibre_oracle(t, db);
  BlownUpFibre b = blown_up_fibre(t, db);
  Json strict = Json::object(), exceptional = Json::object(), oracle = Json::object();
  for (const auto& id : b.strict) strict[id] = p[id].str();
  for (const auto& id : b.exceptional) {
    exceptional[id] = p[id].str();
    oracle[id] = o[id].str();
  }
  Json j = Json::object();
  j["type"] = t.name();
  j["strict"] = strict;
  j["exceptional"] = exceptional;
  j["exceptional_oracle"] = oracle;
  CoefficientWitness w = small_coefficient_witness(t, db);
  j["witness"] = Json::array({w.exceptional, w.coefficient.str()});
  Json samuel = Json::object();
  for (std::size_t s = 0; s < b.exceptional.size(); ++s) samuel[b.exceptional[s]] = b.samuel[s].str();
  j["samuel_multiplicity"] = samuel;
  return j;
}

inline Json to_json(const InvariantsReport& r) {
  Json j = Json::object();
  j["base_genus"] = r.base_genus;
  j["fibres"] = r.fibres;
  j["c2"] = r.c2;
  j["chi"] = r.chi;
  j["delta"] = r.delta.str();
  j["kappa"] = to_string(r.kappa);
  j["kappa_rule_derived"] = r.kappa_rule_derived;
  j["minimal"] = r.minimal;
  j["almost_smooth"] = r.almost_smooth;
  j["isotrivial_consistent"] = r.isotrivial_consistent;
  j["tangent_psef"] = to_string(r.tangent_psef);
  j["kappa_PT"] = r.kappa_pt ? Json(*r.kappa_pt) : Json(nullptr);
  j["kappa_PT_reason"] = r.kappa_pt_reason;
  j["canonical_class"] = Json{{"pullback_degree", r.canonical_pullback_degree.str()},
                              {"total_degree", r.canonical_total_degree.str()}};
  if (r.y_restriction) {
    const auto& y = *r.y_restriction;
    Json yj = Json::object();
    yj["applicable"] = y.applicable;
    yj["reason"] = y.reason;
    yj["criterion"] = y.criterion;
    yj["oracle"] = y.oracle;
    Json ws = Json::array();
    for (const auto& w : y.witnesses)
      ws.push_back(Json{{"fibre", w.fibre}, {"type", w.type}, {"exceptional", w.exceptional},
                        {"coefficient", w.coefficient.str()}});
    yj["witnesses"] = ws;
    j["y_restriction"] = yj;
  } else {
    j["y_restriction"] = nullptr;
  }
  j["criterion"] = kVerdictCriterion;
  return j;
}

inline InvariantsReport report_from_json(const Json& j) {
  InvariantsReport r;
  r.base_genus = j.at("base_genus").get<int>();
  r.fibres = j.at("fibres").get<std::vector<std::string>>();
  r.c2 = j.at("c2").get<int>();
  r.chi = j.at("chi").get<int>();
  r.delta = Rational::parse(j.at("delta").get<std::string>());
  r.kappa = kappa_from_string(j.at("kappa").get<std::string>());
  r.kappa_rule_derived = j.at("kappa_rule_derived").get<bool>();
  r.minimal = j.at("minimal").get<bool>();
  r.almost_smooth = j.at("almost_smooth").get<bool>();
  r.isotrivial_consistent = j.at("isotrivial_consistent").get<bool>();
  r.tangent_psef = tangent_verdict_from_string(j.at("tangent_psef").get<std::string>());
  if (!j.at("kappa_PT").is_null()) r.kappa_pt = j.at("kappa_PT").get<int>();
  r.kappa_pt_reason = j.at("kappa_PT_reason").get<std::string>();
  r.canonical_pullback_degree = Rational::parse(j.at("canonical_class").at("pullback_degree").get<std::string>());
  r.canonical_total_degree = Rational::parse(j.at("canonical_class").at("total_degree").get<std::string>());
  if (!j.at("y_restriction").is_null()) {
    const Json& yj = j.at("y_restriction");
    YRestrictionSummary y;
    y.applicable = yj.at("applicable").get<bool>();
    y.reason = yj.at("reason").get<std::string>();
    y.criterion = yj.at("criterion").get<std::string>();
    y.oracle = yj.at("oracle").get<std::string>();
    for (const auto& w : yj.at("witnesses"))
      y.witnesses.push_back({w.at("fibre").get<std::string>(), w.at("type").get<std::string>(),
                             w.at("exceptional").get<std::string>(),
                             Rational::parse(w.at("coefficient").get<std::string>())});
    r.y_restriction = y;
  }
  return r;
}

}  // namespace kodaira
