#include "cltk/gen.hpp"

#include <cmath>

namespace cltk {

namespace {

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

double pickReal(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ExpPtr genObs(std::mt19937_64& rng, const GenConfig& cfg) {
  const std::string& label = cfg.labels[pick(rng, cfg.labels.size())];
  // Small window around "today"; negative offsets exercise past fixings.
  std::int64_t off = static_cast<std::int64_t>(pick(rng, 11)) - 5;
  return mkObs(label, off);
}

// Mixes bits of (seed, label, day) into a double. splitmix64 finisher.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

TExpr genTExpr(std::mt19937_64& rng, const GenConfig& cfg, std::uint64_t max) {
  if (cfg.templateVars && !cfg.tvars.empty() && pick(rng, 3) == 0)
    return TExpr::variable(cfg.tvars[pick(rng, cfg.tvars.size())]);
  return TExpr::number(pick(rng, max + 1));
}

ExpPtr genRealExp(std::mt19937_64& rng, const GenConfig& cfg, int depth) {
  if (depth <= 0) {
    switch (pick(rng, 3)) {
      case 0:
        return mkReal(pickReal(rng, -10.0, 110.0));
      default:
        return genObs(rng, cfg);
    }
  }
  switch (pick(rng, 6)) {
    case 0:
      return mkReal(pickReal(rng, -10.0, 110.0));
    case 1:
      return genObs(rng, cfg);
    case 2:
      return mkOp(Op::Add, {genRealExp(rng, cfg, depth - 1),
                            genRealExp(rng, cfg, depth - 1)});
    case 3:
      return mkOp(Op::Sub, {genRealExp(rng, cfg, depth - 1),
                            genRealExp(rng, cfg, depth - 1)});
    case 4:
      return mkOp(Op::Neg, {genRealExp(rng, cfg, depth - 1)});
    default:
      return mkOp(Op::Cond,
                  {genBoolExp(rng, cfg, depth - 1),
                   genRealExp(rng, cfg, depth - 1),
                   genRealExp(rng, cfg, depth - 1)});
  }
}

ExpPtr genBoolExp(std::mt19937_64& rng, const GenConfig& cfg, int depth) {
  if (depth <= 0) {
    return mkOp(Op::Lt,
                {genRealExp(rng, cfg, 0), genRealExp(rng, cfg, 0)});
  }
  switch (pick(rng, 6)) {
    case 0:
      return mkBool(pick(rng, 2) == 0);
    case 1:
      return mkOp(Op::Lt, {genRealExp(rng, cfg, depth - 1),
                           genRealExp(rng, cfg, depth - 1)});
    case 2:
      return mkOp(Op::Leq, {genRealExp(rng, cfg, depth - 1),
                            genRealExp(rng, cfg, depth - 1)});
    case 3:
      return mkOp(Op::And, {genBoolExp(rng, cfg, depth - 1),
                            genBoolExp(rng, cfg, depth - 1)});
    case 4:
      return mkOp(Op::Or, {genBoolExp(rng, cfg, depth - 1),
                           genBoolExp(rng, cfg, depth - 1)});
    default:
      return mkOp(Op::Not, {genBoolExp(rng, cfg, depth - 1)});
  }
}

namespace {

ContrPtr genContractAt(std::mt19937_64& rng, const GenConfig& cfg, int depth) {
  auto transfer = [&]() {
    std::size_t i = pick(rng, cfg.parties.size());
    std::size_t j = pick(rng, cfg.parties.size() - 1);
    if (j >= i) ++j;  // from != to
    return mkTransfer(cfg.parties[i], cfg.parties[j], "USD");
  };
  if (depth <= 0) return pick(rng, 4) == 0 ? mkZero() : transfer();
  switch (pick(rng, 8)) {
    case 0:
      return mkZero();
    case 1:
      return transfer();
    case 2:
    case 3:
      return mkScale(genRealExp(rng, cfg, 2),
                     genContractAt(rng, cfg, depth - 1));
    case 4:
      return mkTranslate(genTExpr(rng, cfg, cfg.maxShift),
                         genContractAt(rng, cfg, depth - 1));
    case 5:
      return mkBoth(genContractAt(rng, cfg, depth - 1),
                    genContractAt(rng, cfg, depth - 1));
    default:
      return mkIfWithin(genBoolExp(rng, cfg, 2),
                        genTExpr(rng, cfg, cfg.maxWindow),
                        genContractAt(rng, cfg, depth - 1),
                        genContractAt(rng, cfg, depth - 1));
  }
}

}  // namespace

ContrPtr genContract(std::mt19937_64& rng, const GenConfig& cfg) {
  return genContractAt(rng, cfg, cfg.maxDepth);
}

ExtEnv genTotalEnv(std::uint64_t seed) {
  return ExtEnv::total([seed](const std::string& label, std::int64_t day) {
    std::uint64_t h = mix(seed);
    for (char c : label) h = mix(h ^ static_cast<std::uint64_t>(c));
    h = mix(h ^ static_cast<std::uint64_t>(day));
    double u = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0,1)
    return Value{50.0 + 100.0 * u};
  });
}

TEnv genTEnv(std::mt19937_64& rng, const GenConfig& cfg) {
  TEnv tenv;
  for (const auto& v : cfg.tvars)
    tenv.bind(v, pick(rng, cfg.maxWindow + 1));
  return tenv;
}

Discount genDiscount(std::mt19937_64& rng) {
  return Discount::flatRate(pickReal(rng, 0.0, 0.10));
}

}  // namespace cltk
