#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "cltk/ast.hpp"
#include "cltk/env.hpp"

namespace cltk {

// Property checks that pit the compiler output against the contract trace
// semantics on randomly generated inputs. Each case records both sides of
// the equation it tested so failures are reproducible from the report.
struct CheckCase {
  std::uint64_t seed = 0;
  std::string contract;  // pretty-printed generated contract
  std::uint64_t n = 0;   // advancement steps / cut point, when applicable
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string note;  // failure detail, empty on pass
};

struct CheckStats {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  bool allPassed() const { return failures == 0; }
};

inline constexpr double kCheckRelTol = 1e-9;
inline constexpr double kCheckAbsTol = 1e-12;

bool withinCheckTol(double a, double b);

// Discounted trace sum equals the payoff-expression value.
CheckStats checkCompileSoundness(std::uint64_t seed, std::uint64_t cases,
                                 std::ostream* report);

// cutPayoff at valuation day n equals the discounted trace tail from n.
CheckStats checkCutPayoffNStep(std::uint64_t seed, std::uint64_t cases,
                               std::ostream* report);

// Advancing the contract n steps then compiling equals evaluating the
// original compilation with shifted environments; the contract is compiled
// exactly once per case.
CheckStats checkCommutingDiagram(std::uint64_t seed, std::uint64_t cases,
                                 std::ostream* report);

// Compilation totality on the supported fragment plus trace/payoff
// evaluation under total environments never raising.
CheckStats checkTotality(std::uint64_t seed, std::uint64_t cases,
                         std::ostream* report);

// Exhaustive variant of the cut check: every n in [0, horizon+1] per
// contract, including the strict-guard boundary at each payoff day.
CheckStats checkCutPayoffAllN(std::uint64_t seed, std::uint64_t contracts,
                              std::ostream* report);

// Commuting diagram at n in {1, 2, horizon} with one compilation per
// contract.
CheckStats checkCommutingDiagramNs(std::uint64_t seed,
                                   std::uint64_t contracts,
                                   std::ostream* report);

// Instantiation is template-closed and trace-preserving: instantiating a
// templated contract and tracing under the empty template environment gives
// the same trace as the original under the bindings.
CheckStats checkInstantiation(std::uint64_t seed, std::uint64_t cases,
                              std::ostream* report);

void writeCheckCase(std::ostream& out, const CheckCase& c);

}  // namespace cltk
