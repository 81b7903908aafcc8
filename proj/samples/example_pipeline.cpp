// Reads a fibration spec (default: a g = 1 surface with II* + II fibres),
// prints its invariants report and the blow-up data behind the verdict.

#include "kodaira/kodaira.hpp"

#include <iostream>

using namespace kodaira;

int main(int argc, char** argv) {
  try {
    const std::string text =
        argc > 1 ? read_file(argv[1]) : R"({"base_genus": 1, "fibres": [{"type": "II*"}, {"type": "II"}]})";
    FibrationSpec spec = parse_spec(text);
    InvariantsReport report = make_report(spec);
    std::cout << render_text(report) << "\n";

    YRestrictionResult y = y_restriction_verdict(spec);
    if (!y.applicable) {
      std::cout << "restriction test: " << y.reason << "\n";
      return 0;
    }
    for (const auto& w : y.witnesses) {
      BlownUpFibre b = blown_up_fibre(KodairaType::parse(w.type));
      std::cout << w.fibre << " (" << w.type << "): pulled-back normalised fibre "
                << pullback_normalized_fibre(b.type).str() << "\n"
                << "  smallest exceptional coefficient " << w.coefficient << " on " << w.exceptional << "\n";
    }
    std::cout << "M - delta F with delta = " << y.delta << ": criterion "
              << (y.not_psef() ? "fires" : "does not apply") << ", exact oracle says "
              << (y.oracle.psef ? "pseudo-effective" : "not pseudo-effective") << "\n";
    return y.applicable && y.not_psef() != !y.oracle.psef ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
