#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "cltk/checks.hpp"

using namespace cltk;

// Moderate case counts here; the acceptance binary runs the full-size
// suites with pinned budgets.

TEST_CASE("soundness: discounted trace sum equals the payoff value") {
  std::ostringstream report;
  CheckStats s = checkCompileSoundness(1000, 150, &report);
  CHECK(s.cases == 150);
  CHECK_MESSAGE(s.failures == 0, report.str().c_str());
}

TEST_CASE("cut: tail sums match at a random valuation day") {
  std::ostringstream report;
  CheckStats s = checkCutPayoffNStep(2000, 150, &report);
  CHECK_MESSAGE(s.failures == 0, report.str().c_str());
}

TEST_CASE("cut: tail sums match at every valuation day") {
  std::ostringstream report;
  CheckStats s = checkCutPayoffAllN(3000, 40, &report);
  CHECK_MESSAGE(s.failures == 0, report.str().c_str());
}

TEST_CASE("commuting diagram with a single compilation") {
  std::ostringstream report;
  CheckStats s = checkCommutingDiagram(4000, 150, &report);
  CHECK_MESSAGE(s.failures == 0, report.str().c_str());
  s = checkCommutingDiagramNs(4500, 40, &report);
  CHECK_MESSAGE(s.failures == 0, report.str().c_str());
}

TEST_CASE("totality: compiled contracts never raise under total envs") {
  CheckStats s = checkTotality(5000, 150, nullptr);
  CHECK(s.failures == 0);
}

TEST_CASE("instantiation: template-closed and trace-preserving") {
  std::ostringstream report;
  CheckStats s = checkInstantiation(6000, 150, &report);
  CHECK_MESSAGE(s.failures == 0, report.str().c_str());
}

TEST_CASE("case reports are one JSON object per line") {
  std::ostringstream report;
  checkCompileSoundness(42, 3, &report);
  std::istringstream lines(report.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("seed"));
    CHECK(j.contains("contract"));
    CHECK(j.contains("lhs"));
    CHECK(j.contains("rhs"));
    CHECK(j.at("pass").is_boolean());
  }
  CHECK(count == 3);
}
