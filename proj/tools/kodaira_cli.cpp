// kodaira: invariants, fibre data, Zariski decomposition, pseudo-effectivity
// queries and table verification for relatively minimal elliptic fibrations.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include "kodaira/kodaira.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace kodaira;

enum ExitCode { kOk = 0, kVerificationFailed = 1, kInputError = 2 };

struct Options {
  bool json = false;
  bool text = false;
  std::string path;
  std::string type;
  std::string backend = "fm";
  std::vector<std::string> perturbations;
};

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

int cmd_report(const Options& o) {
  FibrationSpec spec = parse_spec(read_file(o.path));
  InvariantsReport r = make_report(spec);
  if (o.text || !o.json) std::cout << render_text(r);
  if (o.json) print_json(to_json(r));
  return kOk;
}

int cmd_fibre(const Options& o) {
  KodairaType t = KodairaType::parse(o.type, "type");
  FibreModel f = fibre_model(t);
  if (o.json) {
    print_json(to_json(f));
    return kOk;
  }
  DivisorVec n = normalized_fibre(t);
  std::cout << "type " << t.name() << ", Euler number " << f.euler << " (configuration "
            << euler_from_configuration(f) << ")\n";
  std::cout << pad("component", 11) << pad("nu", 4) << pad("self", 6) << "normalised\n";
  for (const auto& c : f.components)
    std::cout << pad(c.id, 11) << pad(std::to_string(c.multiplicity), 4) << pad(c.self_intersection.str(), 6)
              << n[c.id] << "\n";
  if (!normalised_fibre_tabulated(t)) std::cout << "normalised fibre extrapolated from the closed form\n";
  for (const auto& e : f.edges()) std::cout << "edge " << e.a << "-" << e.b << " multiplicity " << e.multiplicity << "\n";
  for (const auto& p : f.points) {
    Ideal i = Ideal::parse(p.gamma_ideal);
    std::cout << "point " << exceptional_id(p) << ": local equation " << p.local_equation << ", ideal " << i.str()
              << "\n";
  }
  return kOk;
}

FeasibilityBackend backend(const Options& o) {
  return o.backend == "simplex" ? FeasibilityBackend::simplex : FeasibilityBackend::fourier_motzkin;
}

int cmd_zariski(const Options& o) {
  DivisorInput in = parse_divisor(read_file(o.path));
  try {
    ZariskiDecomposition z = zariski_decompose(in.divisor, in.configuration, {}, backend(o));
    if (o.json) {
      print_json(to_json(z));
    } else {
      std::cout << "P = " << z.positive.str() << "\n";
      std::cout << "N = " << z.negative.str() << "\n";
      std::cout << "certificates " << (z.certificates.all() ? "hold" : "FAIL") << "\n";
    }
    return z.certificates.all() ? kOk : kVerificationFailed;
  } catch (const NotPseudoEffectiveError& e) {
    PsefResult r = vertical_psef_oracle(in.divisor, in.configuration, backend(o));
    if (o.json) {
      Json j = to_json(r);
      j["error"] = e.what();
      print_json(j);
    } else {
      std::cout << "not pseudo-effective; Farkas multipliers:\n";
      for (const auto& [label, y] : r.certificate.multipliers) std::cout << "  " << y << " * (" << label << ")\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int cmd_psef_oracle(const Options& o) {
  DivisorInput in = parse_divisor(read_file(o.path));
  PsefResult r = vertical_psef_oracle(in.divisor, in.configuration, backend(o));
  Json criterion;
  std::string criterion_text;
  if (in.divisor.fibre_class_coefficient.sign() > 0) {
    criterion = Json{{"verdict", "not-applicable"}, {"reason", "coefficient of F is positive (delta < 0)"}};
    criterion_text = "not-applicable (coefficient of F is positive)";
  } else {
    SignCriterionResult l = sign_criterion(SignCriterionInput::from_divisor(in.divisor), in.configuration);
    criterion = to_json(l);
    criterion_text = (l.verdict == SignCriterionVerdict::fires ? "fires" : "not-applicable") + std::string(" (") + l.reason + ")";
  }
  if (o.json) {
    Json j = to_json(r);
    j["criterion"] = criterion;
    print_json(j);
    return kOk;
  }
  if (r.psef) {
    std::cout << "pseudo-effective\nwitness: " << r.witness.fibre_class_coefficient << " F";
    for (const auto& [fibre, part] : r.witness.effective) std::cout << " + [" << fibre << ": " << part.str() << "]";
    std::cout << "\n";
  } else {
    std::cout << "not pseudo-effective\nFarkas multipliers:\n";
    for (const auto& [label, y] : r.certificate.multipliers) std::cout << "  " << y << " * (" << label << ")\n";
  }
  std::cout << "sign criterion: " << criterion_text << "\n";
  return kOk;
}

int cmd_blowup(const Options& o) {
  KodairaType t = KodairaType::parse(o.type, "type");
  Json j = blowup_json(t);
  if (o.json) {
    print_json(j);
    return kOk;
  }
  std::cout << "type " << t.name() << "\n";
  for (const auto& [id, c] : j["strict"].items()) std::cout << pad("strict " + id, 20) << c.get<std::string>() << "\n";
  for (const auto& [id, c] : j["exceptional"].items())
    std::cout << pad("exceptional " + id, 20) << pad(c.get<std::string>(), 6) << "oracle "
              << j["exceptional_oracle"][id].get<std::string>() << ", e(I) "
              << j["samuel_multiplicity"][id].get<std::string>() << "\n";
  std::cout << "witness " << j["witness"][0].get<std::string>() << " with coefficient "
            << j["witness"][1].get<std::string>() << "\n";
  return kOk;
}

int cmd_verify_tables(const Options& o) {
  KodairaDatabase db = KodairaDatabase::builtin();
  for (const auto& p : o.perturbations) apply_perturbation(db, p);
  VerifyReport r = verify_tables(db);
  if (o.json) {
    Json j = Json::object();
    Json checks = Json::array();
    for (const auto& c : r.checks)
      checks.push_back(Json{{"suite", c.suite}, {"item", c.item}, {"status", to_string(c.status)}, {"detail", c.detail}});
    j["checks"] = checks;
    j["pass"] = r.count(CheckStatus::pass);
    j["fail"] = r.count(CheckStatus::fail);
    j["review"] = r.count(CheckStatus::review);
    print_json(j);
  } else {
    for (const auto& c : r.checks)
      if (c.status != CheckStatus::pass)
        std::cout << pad(to_string(c.status), 7) << pad(c.suite, 16) << c.item << ": " << c.detail << "\n";
    for (const auto& suite : r.suites()) {
      std::size_t pass = 0, total = 0;
      for (const auto& c : r.checks)
        if (c.suite == suite) {
          ++total;
          if (c.status != CheckStatus::fail) ++pass;
        }
      std::cout << pad(pass == total ? "PASS" : "FAIL", 7) << pad(suite, 16) << pass << "/" << total << "\n";
    }
    std::cout << r.count(CheckStatus::pass) << " passed, " << r.count(CheckStatus::fail) << " failed, "
              << r.count(CheckStatus::review) << " for review\n";
  }
  return r.failed() ? kVerificationFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants and table verification for elliptic fibrations"};
  app.require_subcommand(1);
  Options o;
  auto format_flags = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "emit JSON");
    sub->add_flag("--text", o.text, "emit aligned text (default)");
  };
  auto backend_option = [&](CLI::App* sub) {
    sub->add_option("--backend", o.backend, "feasibility backend")->check(CLI::IsMember({"fm", "simplex"}));
  };

  auto* report = app.add_subcommand("report", "invariants report for a fibration spec");
  report->add_option("spec", o.path, "spec JSON file")->required();
  format_flags(report);
  auto* fibre = app.add_subcommand("fibre", "fibre model of a Kodaira type");
  fibre->add_option("type", o.type, "Kodaira symbol, e.g. II*, I3, I0*, 2I0")->required();
  format_flags(fibre);
  auto* zariski = app.add_subcommand("zariski", "Zariski decomposition of a vertical divisor");
  zariski->add_option("divisor", o.path, "divisor JSON file")->required();
  format_flags(zariski);
  backend_option(zariski);
  auto* psef = app.add_subcommand("psef-oracle", "exact pseudo-effectivity of a vertical divisor");
  psef->add_option("divisor", o.path, "divisor JSON file")->required();
  format_flags(psef);
  backend_option(psef);
  auto* blowup = app.add_subcommand("blowup", "pulled-back normalised fibre on the blow-up");
  blowup->add_option("type", o.type, "isotrivial singular type")->required();
  format_flags(blowup);
  auto* verify = app.add_subcommand("verify-tables", "recompute every stored table");
  verify->add_option("--perturb", o.perturbations, "inject a fault, e.g. euler/II*=9 (repeatable)");
  format_flags(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*report) return cmd_report(o);
    if (*fibre) return cmd_fibre(o);
    if (*zariski) return cmd_zariski(o);
    if (*psef) return cmd_psef_oracle(o);
    if (*blowup) return cmd_blowup(o);
    if (*verify) return cmd_verify_tables(o);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kInputError;
}
