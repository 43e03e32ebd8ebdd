#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cltk/ast.hpp"
#include "cltk/env.hpp"

namespace cltk {

// Random well-typed contracts for the property-test harness. Generated
// contracts stay inside the compilable subset: no Let, no Acc, no division
// (so trace semantics never hits an evaluation error on total environments).
struct GenConfig {
  int maxDepth = 6;
  std::uint64_t maxWindow = 10;
  std::uint64_t maxShift = 30;
  bool templateVars = false;  // allow template variables in shifts/windows
  std::vector<std::string> labels = {"FX", "EQ", "IR"};
  std::vector<Party> parties = {"you", "me", "bank"};
  std::vector<std::string> tvars = {"t0", "t1"};
};

ContrPtr genContract(std::mt19937_64& rng, const GenConfig& cfg);
ExpPtr genRealExp(std::mt19937_64& rng, const GenConfig& cfg, int depth);
ExpPtr genBoolExp(std::mt19937_64& rng, const GenConfig& cfg, int depth);
TExpr genTExpr(std::mt19937_64& rng, const GenConfig& cfg, std::uint64_t max);

// Total observable environment: every (label, day) maps deterministically to
// a Real in [50, 150], seeded so distinct seeds give distinct worlds.
ExtEnv genTotalEnv(std::uint64_t seed);

// Template valuation for cfg.tvars, each in [0, cfg.maxWindow].
TEnv genTEnv(std::mt19937_64& rng, const GenConfig& cfg);

// Flat discount curve with a rate in [0, 10%].
Discount genDiscount(std::mt19937_64& rng);

}  // namespace cltk
