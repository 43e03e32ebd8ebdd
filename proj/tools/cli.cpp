#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cltk/checks.hpp"
#include "cltk/compile.hpp"
#include "cltk/errors.hpp"
#include "cltk/il.hpp"
#include "cltk/json_io.hpp"
#include "cltk/kernel.hpp"
#include "cltk/parser.hpp"
#include "cltk/pricing.hpp"
#include "cltk/printer.hpp"
#include "cltk/semantics.hpp"

namespace {

using namespace cltk;

std::string readInput(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw EvalError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json readJsonFile(const std::string& path) {
  std::string text = readInput(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, 0, path + ": " + e.what());
  }
}

// Contract files: JSON when the payload looks like JSON, text otherwise.
ContrPtr readContract(const std::string& path) {
  std::string text = readInput(path);
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '{')
    return contractFromJson(Json::parse(text));
  return parseContract(text);
}

TEnv readTEnv(const std::string& path) {
  if (path.empty()) return TEnv{};
  return tenvFromJson(readJsonFile(path));
}

TEnv parseBindings(const std::vector<std::string>& bindings) {
  TEnv tenv;
  for (const auto& b : bindings) {
    auto eq = b.find('=');
    if (eq == std::string::npos)
      throw ParseError(0, 0, "expected k=v binding, got " + b);
    tenv.bind(b.substr(0, eq),
              static_cast<std::uint64_t>(std::stoull(b.substr(eq + 1))));
  }
  return tenv;
}

int runVerify(int theorem, std::uint64_t cases, std::uint64_t seed,
              const std::string& reportPath) {
  std::ofstream reportFile;
  std::ostream* report = nullptr;
  if (!reportPath.empty()) {
    reportFile.open(reportPath);
    if (!reportFile) throw EvalError("cannot open " + reportPath);
    report = &reportFile;
  }
  CheckStats stats;
  switch (theorem) {
    case 1:
      stats = checkCompileSoundness(seed, cases, report);
      break;
    case 2:
      stats = checkTotality(seed, cases, report);
      break;
    case 4:
      stats = checkCommutingDiagram(seed, cases, report);
      break;
    case 5:
      stats = checkCutPayoffNStep(seed, cases, report);
      break;
    default:
      throw EvalError("unknown theorem id " + std::to_string(theorem));
  }
  Json summary = {{"theorem", theorem},
                  {"cases", stats.cases},
                  {"failures", stats.failures},
                  {"seed", seed}};
  std::cout << summary.dump() << "\n";
  return stats.allPassed() ? 0 : static_cast<int>(ErrorCode::Verification);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cltk: contract language compiler and pricing toolkit"};
  app.require_subcommand(1);

  std::string file, envPath, tenvPath, discPath, modelPath, reportPath;
  std::string format = "kernel", outPath;
  std::vector<std::string> bindings;
  std::uint64_t t = 0, steps = 0, paths = 100000, seed = 1, cases = 100;
  std::vector<std::uint64_t> atDays;
  unsigned threads = 0;
  int theorem = 1;
  bool cut = false, asJson = false;
  std::string p1 = "you", p2 = "me";

  auto* cmdCheck = app.add_subcommand("check", "parse and typecheck");
  cmdCheck->add_option("file", file, "contract file or -")->required();

  auto* cmdInst = app.add_subcommand("inst", "instantiate template variables");
  cmdInst->add_option("file", file)->required();
  cmdInst->add_option("-t,--bind", bindings, "template binding k=v");
  cmdInst->add_flag("--json", asJson, "print JSON instead of contract text");

  auto* cmdCompile = app.add_subcommand("compile", "compile to a payoff expression");
  cmdCompile->add_option("file", file)->required();
  cmdCompile->add_flag("--cut", cut, "apply the valuation-time guard");
  cmdCompile->add_flag("--json", asJson, "print JSON instead of payoff text");

  auto* cmdEval = app.add_subcommand("eval", "compile and evaluate the payoff");
  cmdEval->add_option("file", file)->required();
  cmdEval->add_option("--env", envPath, "observable environment JSON")->required();
  cmdEval->add_option("--tenv", tenvPath, "template environment JSON");
  cmdEval->add_option("--disc", discPath, "discount JSON")->required();
  cmdEval->add_option("--t", t, "valuation day");
  cmdEval->add_flag("--cut", cut, "apply the valuation-time guard");
  cmdEval->add_option("--p1", p1);
  cmdEval->add_option("--p2", p2);

  auto* cmdAdvance = app.add_subcommand("advance", "reduce a contract n days");
  cmdAdvance->add_option("file", file)->required();
  cmdAdvance->add_option("--env", envPath)->required();
  cmdAdvance->add_option("--steps", steps)->required();

  auto* cmdEmit = app.add_subcommand("emit", "emit kernel or functional source");
  cmdEmit->add_option("file", file)->required();
  cmdEmit->add_option("--format", format)
      ->check(CLI::IsMember({"kernel", "functional"}));
  cmdEmit->add_option("--tenv", tenvPath);
  cmdEmit->add_flag("--cut", cut, "apply the valuation-time guard");
  cmdEmit->add_option("-o,--out", outPath, "output file (default stdout)");

  auto* cmdPrice = app.add_subcommand("price", "Monte Carlo price");
  cmdPrice->add_option("file", file)->required();
  cmdPrice->add_option("--model", modelPath)->required();
  cmdPrice->add_option("--paths", paths);
  cmdPrice->add_option("--seed", seed);
  cmdPrice->add_option("--at", atDays, "valuation days (default 0)");
  cmdPrice->add_option("--threads", threads, "0 = hardware concurrency");
  cmdPrice->add_option("--tenv", tenvPath);

  auto* cmdVerify = app.add_subcommand("verify", "run a theorem test suite");
  cmdVerify->add_option("--theorem", theorem, "1, 2, 4 or 5")->required();
  cmdVerify->add_option("--cases", cases);
  cmdVerify->add_option("--seed", seed);
  cmdVerify->add_option("--report", reportPath, "JSONL case report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmdCheck) {
      ContrPtr c = readContract(file);
      typeCheckContr(TypeCtx{}, c);
      std::cout << "ok\n";
      return 0;
    }
    if (*cmdInst) {
      ContrPtr c = readContract(file);
      ContrPtr inst = instantiate(c, parseBindings(bindings));
      if (asJson)
        std::cout << contractToJson(inst).dump(2) << "\n";
      else
        std::cout << printContract(inst) << "\n";
      return 0;
    }
    if (*cmdCompile) {
      ContrPtr c = readContract(file);
      typeCheckContr(TypeCtx{}, c);
      ILPtr il = compileContract(c);
      if (cut) il = cutPayoff(il);
      if (asJson)
        std::cout << ilToJson(il).dump(2) << "\n";
      else
        std::cout << printIL(il) << "\n";
      return 0;
    }
    if (*cmdEval) {
      ContrPtr c = readContract(file);
      typeCheckContr(TypeCtx{}, c);
      ILPtr il = compileContract(c);
      if (cut) il = cutPayoff(il);
      double v = evalAt(t, il, extEnvFromJson(readJsonFile(envPath)),
                        readTEnv(tenvPath),
                        discountFromJson(readJsonFile(discPath)), p1, p2);
      std::cout << Json(v).dump() << "\n";
      return 0;
    }
    if (*cmdAdvance) {
      ContrPtr c = readContract(file);
      typeCheckContr(TypeCtx{}, c);
      auto [residual, due] =
          advance(c, extEnvFromJson(readJsonFile(envPath)), steps);
      Json dueJson = Json::array();
      for (const auto& tr : due) {
        Json day = Json::array();
        for (const auto& [k, v] : tr.entries())
          day.push_back({{"from", std::get<0>(k)},
                         {"to", std::get<1>(k)},
                         {"asset", std::get<2>(k)},
                         {"amount", v}});
        dueJson.push_back(day);
      }
      std::cout << printContract(residual) << "\n";
      std::cout << dueJson.dump() << "\n";
      return 0;
    }
    if (*cmdEmit) {
      ContrPtr c = readContract(file);
      typeCheckContr(TypeCtx{}, c);
      ILPtr il = compileContract(c);
      if (cut) il = cutPayoff(il);
      std::string text = format == "kernel"
                             ? emitKernelSource(reindex(il, readTEnv(tenvPath)))
                             : emitFunctionalSource(il);
      if (outPath.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(outPath);
        if (!out) throw EvalError("cannot open " + outPath);
        out << text;
      }
      return 0;
    }
    if (*cmdPrice) {
      ContrPtr c = readContract(file);
      typeCheckContr(TypeCtx{}, c);
      TEnv tenv = readTEnv(tenvPath);
      Kernel k = reindex(cutPayoff(compileContract(c)), tenv);
      ModelSpec model = modelFromJson(readJsonFile(modelPath));
      if (atDays.empty()) atDays.push_back(0);
      std::vector<PriceResult> results =
          priceAcrossTime(k, model, paths, seed, atDays, tenv, threads);
      Json out = Json::array();
      for (const auto& r : results) out.push_back(priceResultToJson(r));
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (*cmdVerify) return runVerify(theorem, cases, seed, reportPath);
  } catch (const cltk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(cltk::ErrorCode::Eval);
  }
  return 0;
}
