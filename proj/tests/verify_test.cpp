#include "kodaira/kodaira.hpp"

#include <gtest/gtest.h>

using namespace kodaira;

namespace {

struct Fault {
  std::string perturbation;
  std::string suite;
  std::string item;  // prefix of a failing item
};

const std::vector<Fault> kFaults = {
    {"euler/II*=9", "euler", "II*"},
    {"euler/III=4", "euler", "III"},
    {"euler/IV*=7", "euler", "IV*"},
    {"euler/Ib=1", "euler", "I1"},
    {"euler/Ib*=5", "euler", "I1*"},
    {"normalised/II*/e6=1/12", "normalised", "II*/e6"},
    {"normalised/IV/e1=1/2", "normalised", "IV/e1"},
    {"normalised/I0*/e1=1/2", "normalised", "I0*/e1"},
    {"nu/II*/e6=5", "lattice", "II*/kernel"},
    {"nu/III*/e4=3", "lattice", "III*/kernel"},
    {"nu/IV*/e7=2", "lattice", "IV*/dynkin"},
    {"self/III/e1=-1", "lattice", "III/kernel"},
    {"self/I0*/e2=-3", "lattice", "I0*/kernel"},
    {"bound/II*=5", "bounds", "II*"},
    {"bound/IV*=2", "bounds", "IV*"},
    {"pullback/II*/Y_{1,2}=1", "pullback", "II*/Y_{1,2}/additivity"},
    {"pullback/I0*/Y_{1,3}=1", "pullback", "I0*/Y_{1,3}"},
    {"pullback/III*/Y_{3,4}=1/2", "pullback", "III*/Y_{3,4}"},
    {"pullback/IV/Y_{1,2,3}=1/3", "pullback", "IV/Y_{1,2,3}/oracle"},
    {"gamma/II=x^3,y", "local-equations", "II/Y_1/gamma-ideal"},
    {"gamma/IV=x,y", "local-equations", "IV/Y_{1,2,3}/gamma-ideal"},
    {"gamma/II*/3=x^2,y", "local-equations", "II*/Y_{4,5}/gamma-ideal"},
    {"pair/III/0=1", "local-equations", "III/Y_{1,2}/pair"},
    {"equation/II/0=y^2-x^5", "local-equations", "II/Y_1/germs"},
    {"equation/IV/0=y^3-x^2", "local-equations", "IV/Y_{1,2,3}/germs"},
    {"germ/III/0/1=y-x^3", "local-equations", "III/Y_{1,2}/germs"},
};

VerifyReport perturbed(const std::string& fault) {
  KodairaDatabase db = KodairaDatabase::builtin();
  apply_perturbation(db, fault);
  return verify_tables(db);
}

}  // namespace

TEST(VerifyTables, CleanDatabaseHasNoFailures) {
  VerifyReport r = verify_tables();
  for (const auto& c : r.checks) EXPECT_NE(c.status, CheckStatus::fail) << c.suite << " " << c.item << ": " << c.detail;
  EXPECT_GT(r.count(CheckStatus::pass), 300u);
  EXPECT_EQ(r.suites(), (std::vector<std::string>{"euler", "normalised", "lattice", "bounds", "local-equations",
                                                  "pullback"}));
}

TEST(VerifyTables, RecordedDiscrepanciesAreReportedForReview) {
  VerifyReport r = verify_tables();
  std::vector<std::string> review;
  for (const auto& c : r.checks)
    if (c.status == CheckStatus::review) review.push_back(c.item);
  EXPECT_EQ(review, (std::vector<std::string>{"II/Y_1/oracle", "III/Y_{1,2}/oracle"}));
}

TEST(VerifyTables, EveryInjectedFaultIsDetected) {
  ASSERT_GE(kFaults.size(), 20u);
  for (const auto& f : kFaults) {
    VerifyReport r = perturbed(f.perturbation);
    EXPECT_TRUE(r.failed()) << f.perturbation;
    EXPECT_TRUE(r.failed(f.suite, f.item)) << f.perturbation << " should fail " << f.suite << " " << f.item;
  }
}

TEST(VerifyTables, EulerFaultPropagatesToNormalisedFibre) {
  VerifyReport r = perturbed("euler/II*=9");
  EXPECT_TRUE(r.failed("euler", "II*"));
  EXPECT_TRUE(r.failed("normalised", "II*"));
}

TEST(VerifyTables, OracleValueReplacingRecordedEntryIsFlagged) {
  // a stored value changed to the oracle's is not a fault, but the record is stale
  VerifyReport r = perturbed("pullback/II/Y_1=1/4");
  EXPECT_FALSE(r.failed());
  bool flagged = false;
  for (const auto& c : r.checks)
    if (c.item == "II/Y_1/oracle") flagged = c.status == CheckStatus::review;
  EXPECT_TRUE(flagged);
  EXPECT_TRUE(perturbed("pullback/II/Y_1=1/5").failed("pullback", "II/Y_1/oracle"));
}

TEST(VerifyTables, MalformedPerturbationsAreRejected) {
  KodairaDatabase db = KodairaDatabase::builtin();
  for (std::string bad : {"euler/II*", "nothing/II=1", "euler/V=3", "nu/II*/e99=1", "pullback/II*/Y_{9,9}=1",
                          "germ/III/0/7=y", "gamma/II/4=x,y", "euler/II=two", "normalised/II*=1"})
    EXPECT_THROW(apply_perturbation(db, bad), std::invalid_argument) << bad;
}
