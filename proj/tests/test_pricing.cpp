#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "cltk/compile.hpp"
#include "cltk/kernel.hpp"
#include "cltk/parser.hpp"
#include "cltk/pricing.hpp"

using namespace cltk;

namespace {

ContrPtr loadContract(const std::string& name) {
  std::ifstream in(std::string(CLTK_CONTRACT_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseContract(buf.str());
}

ModelSpec singleAsset(const std::string& label, double spot, double vol,
                      double rate) {
  ModelSpec m;
  m.order = {label};
  m.assets[label] = AssetSpec{spot, vol, rate};
  m.rate = rate;
  return m;
}

Kernel callKernel() {
  return reindex(cutPayoff(compileContract(loadContract("european-call.cl"))),
                 TEnv{});
}

}  // namespace

TEST_CASE("inverse normal CDF hits known quantiles") {
  CHECK(invNormalCdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(invNormalCdf(0.5) == doctest::Approx(0.0));
  CHECK(invNormalCdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
  // Upper-tail x is capped: for x beyond ~4 the CDF is so close to 1 that
  // the double representation of p itself limits round-trip accuracy.
  for (double x : {-6.0, -2.5, -0.3, 0.0, 0.7, 3.1, 4.0})
    CHECK(invNormalCdf(normalCdf(x)) == doctest::Approx(x).epsilon(1e-10));
  CHECK_THROWS_AS(invNormalCdf(0.0), EvalError);
  CHECK_THROWS_AS(invNormalCdf(1.0), EvalError);
}

TEST_CASE("cholesky factor of a known matrix") {
  auto l = cholesky({{1.0, 0.5}, {0.5, 1.0}});
  CHECK(l[0][0] == doctest::Approx(1.0));
  CHECK(l[1][0] == doctest::Approx(0.5));
  CHECK(l[1][1] == doctest::Approx(std::sqrt(0.75)));
  CHECK_THROWS_AS(cholesky({{1.0, 2.0}, {2.0, 1.0}}), EvalError);  // not PD
  CHECK_THROWS_AS(cholesky({{1.0, 0.1}, {0.2, 1.0}}), EvalError);  // asym
}

TEST_CASE("counter RNG is a pure function of (seed, path, index)") {
  CounterRng a(7, 3), b(7, 3), c(8, 3), d(7, 4);
  CHECK(a.bits(0) == b.bits(0));
  CHECK(a.bits(0) != c.bits(0));
  CHECK(a.bits(0) != d.bits(0));
  CHECK(a.bits(0) != a.bits(1));
  double u = a.uniform(5);
  CHECK(u > 0.0);
  CHECK(u < 1.0);
}

TEST_CASE("Black-Scholes call against an independent quadrature value") {
  // Oracle computed by Simpson integration of the discounted payoff against
  // the lognormal terminal density, frozen before the implementation.
  CHECK(blackScholesCall(100, 100, 0.05, 0.2, 90.0 / 365.0) ==
        doctest::Approx(4.579032257457629).epsilon(1e-6));
  CHECK(blackScholesCall(100, 100, 0.0, 0.2, 90.0 / 365.0) ==
        doctest::Approx(3.960376146988473).epsilon(1e-9));
  // Deep in the money with no vol: forward minus discounted strike.
  CHECK(blackScholesCall(150, 100, 0.03, 1e-9, 1.0) ==
        doctest::Approx(150 - 100 * std::exp(-0.03)));
}

TEST_CASE("simulated paths are risk-neutral on average") {
  // Discounted terminal spot must be a martingale: E[e^{-rT} S_T] = S0.
  Kernel k = callKernel();
  ModelSpec m = singleAsset("AAPL", 100.0, 0.25, 0.04);
  double sum = 0.0;
  const std::uint64_t n = 200000;
  for (std::uint64_t p = 0; p < n; ++p)
    sum += simulatePath(k, m, 99, p)[0][0];
  double fwd = sum / static_cast<double>(n);
  double expected = 100.0 * std::exp(0.04 * 90.0 / 365.0);
  CHECK(fwd == doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("Monte Carlo call price matches Black-Scholes") {
  Kernel k = callKernel();
  for (double r : {0.0, 0.05}) {
    CAPTURE(r);
    ModelSpec m = singleAsset("AAPL", 100.0, 0.2, r);
    PriceResult res = priceMC(k, m, 100000, 42, 0, TEnv{});
    double bs = blackScholesCall(100, 100, r, 0.2, 90.0 / 365.0);
    CHECK(res.stdError > 0.0);
    CHECK(res.stdError <= 0.15);
    CHECK(std::fabs(res.price - bs) <= 3.0 * res.stdError);
  }
}

TEST_CASE("prices are identical across thread counts") {
  Kernel k = callKernel();
  ModelSpec m = singleAsset("AAPL", 100.0, 0.2, 0.05);
  PriceResult one = priceMC(k, m, 50000, 7, 0, TEnv{}, 1);
  PriceResult eight = priceMC(k, m, 50000, 7, 0, TEnv{}, 8);
  CHECK(one.price == eight.price);
  CHECK(one.stdError == eight.stdError);
}

TEST_CASE("degenerate model prices the deterministic payoff") {
  // sigma = 0: every path is the forward curve, so the price equals a
  // single deterministic evaluation.
  Kernel k = callKernel();
  ModelSpec m = singleAsset("AAPL", 100.0, 0.0, 0.05);
  PriceResult res = priceMC(k, m, 1, 1, 0, TEnv{});
  double fwd = 100.0 * std::exp(0.05 * 90.0 / 365.0);
  double expected = (fwd - 100.0) * std::exp(-0.05 * 90.0 / 365.0);
  CHECK(res.price == doctest::Approx(expected).epsilon(1e-12));
  CHECK(res.stdError == 0.0);
}

TEST_CASE("pricing across time reuses one path set") {
  Kernel k = callKernel();
  ModelSpec m = singleAsset("AAPL", 100.0, 0.2, 0.05);
  auto series = priceAcrossTime(k, m, 20000, 5, {0, 45, 90, 91}, TEnv{});
  REQUIRE(series.size() == 4);
  // The option only pays at day 90, so its value is unchanged until the
  // payment is cut after day 90.
  CHECK(series[0].price == series[1].price);
  CHECK(series[1].price == series[2].price);
  CHECK(series[3].price == 0.0);
  // Same day twice in one call equals a separate single-day call.
  PriceResult solo = priceMC(k, m, 20000, 5, 45, TEnv{});
  CHECK(solo.price == series[1].price);
}

TEST_CASE("correlated assets move together") {
  ContrPtr c = loadContract("double-option.cl");
  Kernel k = reindex(cutPayoff(compileContract(c)), TEnv{});
  ModelSpec m;
  m.order = {"AAPL", "MSFT"};
  m.rate = 0.0;
  m.assets["AAPL"] = AssetSpec{100.0, 0.2, 0.0};
  m.assets["MSFT"] = AssetSpec{250.0, 0.2, 0.0};

  auto corrOf = [&](double rho) {
    m.corr = {{1.0, rho}, {rho, 1.0}};
    SUBCASE("") {}
    double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    const std::uint64_t n = 20000;
    for (std::uint64_t p = 0; p < n; ++p) {
      auto ext = simulatePath(k, m, 3, p);
      double x = std::log(ext[0][0]);
      double y = std::log(ext[0][1]);
      sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
    }
    double nx = static_cast<double>(n);
    double cov = sxy / nx - (sx / nx) * (sy / nx);
    double vx = sxx / nx - (sx / nx) * (sx / nx);
    double vy = syy / nx - (sy / nx) * (sy / nx);
    return cov / std::sqrt(vx * vy);
  };
  CHECK(corrOf(0.8) == doctest::Approx(0.8).epsilon(0.05));
  CHECK(corrOf(-0.5) == doctest::Approx(-0.5).epsilon(0.05));
}

TEST_CASE("model JSON parsing") {
  nlohmann::json j = {
      {"labels",
       {{"AAPL", {{"spot", 100.0}, {"vol", 0.2}}},
        {"MSFT", {{"spot", 250.0}, {"vol", 0.3}, {"drift", 0.01}}}}},
      {"rate", 0.05},
      {"corr", {{1.0, 0.4}, {0.4, 1.0}}}};
  ModelSpec m = modelFromJson(j);
  CHECK(m.order == std::vector<std::string>{"AAPL", "MSFT"});
  CHECK(m.at("AAPL").drift == 0.05);  // defaults to the flat rate
  CHECK(m.at("MSFT").drift == 0.01);
  CHECK(m.dayCount == 365.0);
  CHECK(m.corr[0][1] == 0.4);
  CHECK_THROWS_AS(m.at("GOOG"), EvalError);
}

TEST_CASE("negative observation days cannot be simulated") {
  ILPtr il = mkModel("AAPL", mkTnumZ(-1));
  Kernel k = reindex(il, TEnv{});
  ModelSpec m = singleAsset("AAPL", 100.0, 0.2, 0.0);
  CHECK_THROWS_AS(simulatePath(k, m, 1, 0), EvalError);
}
