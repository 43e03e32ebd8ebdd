#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "cltk/compile.hpp"
#include "cltk/gen.hpp"
#include "cltk/json_io.hpp"
#include "cltk/kernel.hpp"
#include "cltk/parser.hpp"

using namespace cltk;

namespace {

ILTExprPtr tnum(std::uint64_t n) { return mkTexpr(TExpr::number(n)); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), ("cannot open " + path).c_str());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ContrPtr loadContract(const std::string& name) {
  return parseContract(slurp(std::string(CLTK_CONTRACT_DIR) + "/" + name));
}

std::string golden(const std::string& name) {
  return slurp(std::string(CLTK_TEST_DIR) + "/golden/" + name);
}

}  // namespace

TEST_CASE("reindexing maps payoff days 100 and 200 to rows 0 and 1") {
  ILPtr il = mkBinOp(ILBinOp::Add, mkPayoff(tnum(100), "X", "Y"),
                     mkPayoff(tnum(200), "X", "Y"));
  Kernel k = reindex(il, TEnv{});
  CHECK(k.rows == std::vector<std::int64_t>{100, 200});
  const auto& add = std::get<KExpr::BinOp>(k.body->node);
  CHECK(std::get<KExpr::PayRef>(add.left->node).row == 0);
  CHECK(std::get<KExpr::PayRef>(add.right->node).row == 1);
}

TEST_CASE("a single observation becomes ObsRef(0,0)") {
  ILPtr il = mkModel("AAPL", mkTnumZ(0));
  Kernel k = reindex(il, TEnv{});
  CHECK(k.rows == std::vector<std::int64_t>{0});
  CHECK(k.cols == std::vector<std::string>{"AAPL"});
  const auto& obs = std::get<KExpr::ObsRef>(k.body->node);
  CHECK(obs.row == 0);
  CHECK(obs.col == 0);
}

TEST_CASE("templated option rows resolve under the bindings") {
  ContrPtr c = loadContract("template-option.cl");
  TEnv tenv;
  tenv.bind("t0", 10);
  tenv.bind("t1", 80);
  Kernel k = reindex(compileContract(c), tenv);
  CHECK(k.rows == std::vector<std::int64_t>{10, 90});
  CHECK(k.cols == std::vector<std::string>{"AAPL"});
  CHECK(k.tvars == std::vector<std::string>{"t0", "t1"});
}

TEST_CASE("loop windows materialize contiguous row blocks") {
  ContrPtr c = loadContract("barrier.cl");
  Kernel k = reindex(compileContract(c), TEnv{});
  REQUIRE(k.rows.size() == 31);
  for (std::size_t r = 0; r < k.rows.size(); ++r)
    CHECK(k.rows[r] == static_cast<std::int64_t>(r));
}

TEST_CASE("constant function kernel") {
  Kernel k = reindex(mkFloat(0.0), TEnv{});
  CHECK(k.rows.empty());
  KernelInput in;
  CHECK(evalKernel(k, in, "you", "me") == 0.0);
}

TEST_CASE("kernel and payoff expression agree on sampled inputs") {
  TEnv tenv;
  tenv.bind("t0", 10);
  tenv.bind("t1", 80);
  for (const char* name :
       {"european-call.cl", "fx-swap.cl", "template-option.cl", "barrier.cl",
        "double-option.cl"}) {
    CAPTURE(name);
    ContrPtr c = loadContract(name);
    ILPtr il = cutPayoff(compileContract(c));
    Kernel k = reindex(il, tenv);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      ExtEnv env = genTotalEnv(seed);
      Discount disc = Discount::flatRate(0.04);
      for (std::uint64_t tNow : {0u, 25u, 90u}) {
        KernelInput in = sampleKernelInput(k, env, disc, tNow, tenv);
        double direct = evalAt(tNow, il, env, tenv, disc, "you", "me");
        CHECK(evalKernel(k, in, "you", "me") == direct);
      }
    }
  }
}

TEST_CASE("emitted source interprets to the same value as the kernel") {
  TEnv tenv;
  tenv.bind("t0", 10);
  tenv.bind("t1", 80);
  for (const char* name :
       {"european-call.cl", "template-option.cl", "barrier.cl",
        "double-option.cl"}) {
    CAPTURE(name);
    ContrPtr c = loadContract(name);
    Kernel k = reindex(cutPayoff(compileContract(c)), tenv);
    std::string source = emitKernelSource(k);
    for (std::uint64_t seed : {21u, 22u}) {
      ExtEnv env = genTotalEnv(seed);
      KernelInput in =
          sampleKernelInput(k, env, Discount::flatRate(0.02), 0, tenv);
      CHECK(interpretKernelSource(source, in, "you", "me") ==
            evalKernel(k, in, "you", "me"));
    }
  }
}

TEST_CASE("emitted source on generated contracts, differentially") {
  GenConfig cfg;
  for (std::uint64_t s = 300; s < 330; ++s) {
    std::mt19937_64 rng(s);
    ContrPtr c = genContract(rng, cfg);
    ExtEnv env = genTotalEnv(s);
    TEnv tenv;
    Kernel k = reindex(cutPayoff(fromContr(c, tnum(0))), tenv);
    KernelInput in =
        sampleKernelInput(k, env, Discount::flatRate(0.05), 3, tenv);
    CAPTURE(s);
    CHECK(interpretKernelSource(emitKernelSource(k), in, "you", "me") ==
          evalKernel(k, in, "you", "me"));
  }
}

TEST_CASE("barrier kernel source golden") {
  Kernel k = reindex(compileContract(loadContract("barrier.cl")), TEnv{});
  CHECK(emitKernelSource(k) == golden("barrier.kernel"));
}

TEST_CASE("european call kernel source golden (cut form)") {
  Kernel k =
      reindex(cutPayoff(compileContract(loadContract("european-call.cl"))),
              TEnv{});
  CHECK(emitKernelSource(k) == golden("european-call.kernel"));
}

TEST_CASE("double option kernel source golden") {
  Kernel k =
      reindex(compileContract(loadContract("double-option.cl")), TEnv{});
  CHECK(emitKernelSource(k) == golden("double-option.kernel"));
}

TEST_CASE("functional source golden") {
  ILPtr il = compileContract(loadContract("template-option.cl"));
  CHECK(emitFunctionalSource(il) == golden("template-option.fn"));
}

TEST_CASE("kernel JSON round trip") {
  TEnv tenv;
  tenv.bind("t0", 10);
  tenv.bind("t1", 80);
  Kernel k =
      reindex(cutPayoff(compileContract(loadContract("template-option.cl"))),
              tenv);
  Kernel back = kernelFromJson(kernelToJson(k));
  CHECK(back.rows == k.rows);
  CHECK(back.cols == k.cols);
  CHECK(back.tvars == k.tvars);
  CHECK(back.parties == k.parties);
  CHECK(back.horizon == k.horizon);
  ExtEnv env = genTotalEnv(5);
  KernelInput in =
      sampleKernelInput(k, env, Discount::flatRate(0.01), 10, tenv);
  CHECK(evalKernel(back, in, "you", "me") == evalKernel(k, in, "you", "me"));
}

TEST_CASE("kernel input shape errors are reported") {
  Kernel k = reindex(mkModel("A", mkTnumZ(0)), TEnv{});
  KernelInput in;  // empty ext
  CHECK_THROWS_AS(evalKernel(k, in, "you", "me"), EvalError);
}
