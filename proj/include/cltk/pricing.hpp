#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "cltk/env.hpp"
#include "cltk/kernel.hpp"

namespace cltk {

// Market model: correlated geometric Brownian motion per observable label,
// discounted at a flat continuously compounded rate.
struct AssetSpec {
  double spot = 0.0;
  double vol = 0.0;
  double drift = 0.0;  // risk-neutral default: the flat rate
};

struct ModelSpec {
  // Label order fixes the correlation-matrix indices.
  std::vector<std::string> order;
  std::map<std::string, AssetSpec> assets;
  std::vector<std::vector<double>> corr;  // identity when empty
  double rate = 0.0;
  double dayCount = 365.0;

  const AssetSpec& at(const std::string& label) const;
};

ModelSpec modelFromJson(const nlohmann::json& j);

// Lower-triangular Cholesky factor; throws EvalError unless the matrix is
// symmetric positive definite.
std::vector<std::vector<double>> cholesky(
    const std::vector<std::vector<double>>& m);

// Counter-based RNG: value i of the stream keyed by (seed, path) is a pure
// function of (seed, path, i), so draws are independent of thread count and
// evaluation order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t path)
      : seed_(seed), path_(path) {}

  std::uint64_t bits(std::uint64_t i) const;
  double uniform(std::uint64_t i) const;  // (0, 1)
  double normal(std::uint64_t i) const;

 private:
  std::uint64_t seed_, path_;
};

// Inverse standard normal CDF (Acklam-style rational initial guess refined
// with one Halley step against erfc); |error| < 1e-13 on (0,1).
double invNormalCdf(double p);
double normalCdf(double x);

// Undiscounted Black-Scholes call value; the analytic oracle used by the
// Monte Carlo tests.
double blackScholesCall(double spot, double strike, double rate, double vol,
                        double tYears);

struct PriceResult {
  double price = 0.0;
  double stdError = 0.0;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  std::uint64_t valuationDay = 0;
};

nlohmann::json priceResultToJson(const PriceResult& r);

// One GBM path sampled at the kernel's row days (which must be >= 0);
// returns ext[row][col].
std::vector<std::vector<double>> simulatePath(const Kernel& k,
                                              const ModelSpec& model,
                                              std::uint64_t seed,
                                              std::uint64_t path);

// Deterministic Monte Carlo price: identical bits for any thread count.
PriceResult priceMC(const Kernel& k, const ModelSpec& model,
                    std::uint64_t paths, std::uint64_t seed,
                    std::uint64_t valuationDay, const TEnv& tenv,
                    unsigned threads = 0);

// Price the same kernel at several valuation days, reusing one path set and
// never recompiling. The kernel must come from a cutPayoff'd expression for
// the results to mean "value of the remaining cashflows".
std::vector<PriceResult> priceAcrossTime(const Kernel& k,
                                         const ModelSpec& model,
                                         std::uint64_t paths,
                                         std::uint64_t seed,
                                         const std::vector<std::uint64_t>& days,
                                         const TEnv& tenv,
                                         unsigned threads = 0);

}  // namespace cltk
