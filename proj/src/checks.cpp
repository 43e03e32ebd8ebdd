#include "cltk/checks.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "cltk/compile.hpp"
#include "cltk/gen.hpp"
#include "cltk/il.hpp"
#include "cltk/printer.hpp"
#include "cltk/semantics.hpp"

namespace cltk {

bool withinCheckTol(double a, double b) {
  double diff = std::fabs(a - b);
  if (diff <= kCheckAbsTol) return true;
  return diff <= kCheckRelTol * std::max(std::fabs(a), std::fabs(b));
}

void writeCheckCase(std::ostream& out, const CheckCase& c) {
  nlohmann::json j = {{"seed", c.seed}, {"contract", c.contract},
                     {"n", c.n},       {"lhs", c.lhs},
                     {"rhs", c.rhs},   {"pass", c.pass}};
  if (!c.note.empty()) j["note"] = c.note;
  out << j.dump() << "\n";
}

namespace {

constexpr const char* kP1 = "you";
constexpr const char* kP2 = "me";

double discountedTraceSum(const Trace& trace, const Discount& disc,
                          std::uint64_t from, std::uint64_t horizon) {
  double sum = 0.0;
  for (std::uint64_t t = from; t < horizon; ++t)
    sum += disc(t) * trace.at(t).getAllAssets(kP1, kP2);
  return sum;
}

struct CaseEnv {
  ContrPtr contract;
  TEnv tenv;
  ExtEnv env;
  Discount disc;
  std::uint64_t horizon;
};

CaseEnv makeCase(std::uint64_t caseSeed, bool templateVars) {
  std::mt19937_64 rng(caseSeed);
  GenConfig cfg;
  cfg.templateVars = templateVars;
  CaseEnv c{genContract(rng, cfg), genTEnv(rng, cfg), genTotalEnv(caseSeed),
            genDiscount(rng), 0};
  c.horizon = horizon(c.contract, c.tenv);
  return c;
}

CheckStats runCases(std::uint64_t seed, std::uint64_t cases,
                    std::ostream* report,
                    const std::function<CheckCase(std::uint64_t)>& one) {
  CheckStats stats;
  for (std::uint64_t i = 0; i < cases; ++i) {
    CheckCase c = one(seed + i);
    ++stats.cases;
    if (!c.pass) ++stats.failures;
    if (report) writeCheckCase(*report, c);
  }
  return stats;
}

}  // namespace

CheckStats checkCompileSoundness(std::uint64_t seed, std::uint64_t cases,
                                 std::ostream* report) {
  return runCases(seed, cases, report, [](std::uint64_t s) {
    CaseEnv ce = makeCase(s, /*templateVars=*/true);
    CheckCase out;
    out.seed = s;
    out.contract = printContract(ce.contract);
    out.lhs = discountedTraceSum(
        contractTrace(ce.contract, ce.env, ce.tenv), ce.disc, 0, ce.horizon);
    ILPtr il = fromContr(ce.contract, mkTexpr(TExpr::number(0)));
    out.rhs = evalAt(0, il, ce.env, ce.tenv, ce.disc, kP1, kP2);
    out.pass = withinCheckTol(out.lhs, out.rhs);
    if (!out.pass) out.note = "discounted trace sum != payoff value";
    return out;
  });
}

CheckStats checkCutPayoffNStep(std::uint64_t seed, std::uint64_t cases,
                               std::ostream* report) {
  return runCases(seed, cases, report, [](std::uint64_t s) {
    CaseEnv ce = makeCase(s, /*templateVars=*/true);
    std::mt19937_64 rng(s ^ 0x5bd1e995u);
    std::uint64_t n =
        std::uniform_int_distribution<std::uint64_t>(0, ce.horizon)(rng);
    CheckCase out;
    out.seed = s;
    out.n = n;
    out.contract = printContract(ce.contract);
    out.lhs = discountedTraceSum(
        contractTrace(ce.contract, ce.env, ce.tenv), ce.disc, n, ce.horizon);
    ILPtr il = fromContr(ce.contract, mkTexpr(TExpr::number(0)));
    out.rhs = evalAt(n, cutPayoff(il), ce.env, ce.tenv, ce.disc, kP1, kP2);
    out.pass = withinCheckTol(out.lhs, out.rhs);
    if (!out.pass) out.note = "trace tail sum != cutPayoff value";
    return out;
  });
}

CheckStats checkCommutingDiagram(std::uint64_t seed, std::uint64_t cases,
                                 std::ostream* report) {
  return runCases(seed, cases, report, [](std::uint64_t s) {
    // Advancement requires template-closed contracts.
    CaseEnv ce = makeCase(s, /*templateVars=*/false);
    std::mt19937_64 rng(s ^ 0x27d4eb2fu);
    std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(
        0, std::min<std::uint64_t>(ce.horizon, 20))(rng);
    CheckCase out;
    out.seed = s;
    out.n = n;
    out.contract = printContract(ce.contract);

    // Pricing path: compile once, then move the valuation day.
    resetCompileCount();
    ILPtr cut = cutPayoff(compileContract(ce.contract));
    out.lhs = evalAt(n, cut, ce.env, ce.tenv, ce.disc, kP1, kP2);

    // Specification path: reduce the contract n days, then compile the
    // residual contract under the day-n environments.
    auto [advanced, due] = advance(ce.contract, ce.env, n);
    ILPtr ilAdv = fromContr(advanced, mkTexpr(TExpr::number(0)));
    out.rhs = evalAt(0, ilAdv, ce.env.shifted(static_cast<std::int64_t>(n)),
                     ce.tenv, ce.disc.shifted(static_cast<std::int64_t>(n)),
                     kP1, kP2);
    out.pass = withinCheckTol(out.lhs, out.rhs);
    if (!out.pass) {
      out.note = "advanced-contract value != cutPayoff value";
    } else if (compileCount() != 1) {
      out.pass = false;
      out.note = "pricing path recompiled the contract";
    }
    return out;
  });
}

CheckStats checkCutPayoffAllN(std::uint64_t seed, std::uint64_t contracts,
                              std::ostream* report) {
  return runCases(seed, contracts, report, [](std::uint64_t s) {
    CaseEnv ce = makeCase(s, /*templateVars=*/true);
    CheckCase out;
    out.seed = s;
    out.contract = printContract(ce.contract);
    out.pass = true;
    Trace trace = contractTrace(ce.contract, ce.env, ce.tenv);
    ILPtr cut = cutPayoff(fromContr(ce.contract, mkTexpr(TExpr::number(0))));
    for (std::uint64_t n = 0; n <= ce.horizon + 1; ++n) {
      double lhs = discountedTraceSum(trace, ce.disc, n, ce.horizon);
      double rhs = evalAt(n, cut, ce.env, ce.tenv, ce.disc, kP1, kP2);
      if (!withinCheckTol(lhs, rhs)) {
        out.pass = false;
        out.n = n;
        out.lhs = lhs;
        out.rhs = rhs;
        out.note = "trace tail sum != cutPayoff value";
        break;
      }
    }
    return out;
  });
}

CheckStats checkCommutingDiagramNs(std::uint64_t seed,
                                   std::uint64_t contracts,
                                   std::ostream* report) {
  return runCases(seed, contracts, report, [](std::uint64_t s) {
    CaseEnv ce = makeCase(s, /*templateVars=*/false);
    CheckCase out;
    out.seed = s;
    out.contract = printContract(ce.contract);
    out.pass = true;

    resetCompileCount();
    ILPtr cut = cutPayoff(compileContract(ce.contract));

    std::vector<std::uint64_t> ns = {1, 2, ce.horizon};
    for (std::uint64_t n : ns) {
      double lhs = evalAt(n, cut, ce.env, ce.tenv, ce.disc, kP1, kP2);
      auto [advanced, due] = advance(ce.contract, ce.env, n);
      ILPtr ilAdv = fromContr(advanced, mkTexpr(TExpr::number(0)));
      double rhs =
          evalAt(0, ilAdv, ce.env.shifted(static_cast<std::int64_t>(n)),
                 ce.tenv, ce.disc.shifted(static_cast<std::int64_t>(n)), kP1,
                 kP2);
      if (!withinCheckTol(lhs, rhs)) {
        out.pass = false;
        out.n = n;
        out.lhs = lhs;
        out.rhs = rhs;
        out.note = "advanced-contract value != cutPayoff value";
        break;
      }
    }
    if (out.pass && compileCount() != 1) {
      out.pass = false;
      out.note = "pricing path recompiled the contract";
    }
    return out;
  });
}

CheckStats checkInstantiation(std::uint64_t seed, std::uint64_t cases,
                              std::ostream* report) {
  return runCases(seed, cases, report, [](std::uint64_t s) {
    CaseEnv ce = makeCase(s, /*templateVars=*/true);
    CheckCase out;
    out.seed = s;
    out.contract = printContract(ce.contract);
    out.pass = true;
    // Two independent template valuations per contract.
    std::mt19937_64 rng(s ^ 0x85ebca6bu);
    GenConfig cfg;
    cfg.templateVars = true;
    for (const TEnv& tenv : {ce.tenv, genTEnv(rng, cfg)}) {
      ContrPtr inst = instantiate(ce.contract, tenv);
      if (!isTemplateClosed(inst)) {
        out.pass = false;
        out.note = "instantiation left a template variable";
        return out;
      }
      Trace orig = contractTrace(ce.contract, ce.env, tenv);
      Trace instd = contractTrace(inst, ce.env, TEnv{});
      std::uint64_t hor = horizon(ce.contract, tenv);
      for (std::uint64_t t = 0; t < hor + 1; ++t) {
        if (!(orig.at(t) == instd.at(t))) {
          out.pass = false;
          out.n = t;
          out.note = "instantiated trace differs at day " + std::to_string(t);
          return out;
        }
      }
    }
    return out;
  });
}

CheckStats checkTotality(std::uint64_t seed, std::uint64_t cases,
                         std::ostream* report) {
  return runCases(seed, cases, report, [](std::uint64_t s) {
    CaseEnv ce = makeCase(s, /*templateVars=*/true);
    CheckCase out;
    out.seed = s;
    out.contract = printContract(ce.contract);
    try {
      ILPtr il = fromContr(ce.contract, mkTexpr(TExpr::number(0)));
      out.rhs = evalAt(0, il, ce.env, ce.tenv, ce.disc, kP1, kP2);
      out.lhs = out.rhs;
      out.pass = true;
    } catch (const Error& e) {
      out.pass = false;
      out.note = std::string("raised: ") + e.what();
    }
    return out;
  });
}

}  // namespace cltk
