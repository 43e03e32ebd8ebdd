#include "cltk/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "cltk/errors.hpp"

namespace cltk {

const AssetSpec& ModelSpec::at(const std::string& label) const {
  auto it = assets.find(label);
  if (it == assets.end())
    throw EvalError("model has no asset spec for label " + label);
  return it->second;
}

ModelSpec modelFromJson(const nlohmann::json& j) {
  ModelSpec m;
  m.rate = j.value("rate", 0.0);
  m.dayCount = j.value("dayCount", 365.0);
  const auto& labels = j.at("labels");
  if (j.contains("order")) {
    m.order = j.at("order").get<std::vector<std::string>>();
  } else {
    for (auto it = labels.begin(); it != labels.end(); ++it)
      m.order.push_back(it.key());
    std::sort(m.order.begin(), m.order.end());
  }
  for (const auto& label : m.order) {
    const auto& spec = labels.at(label);
    AssetSpec a;
    a.spot = spec.at("spot").get<double>();
    a.vol = spec.at("vol").get<double>();
    a.drift = spec.value("drift", m.rate);
    m.assets[label] = a;
  }
  if (j.contains("corr"))
    m.corr = j.at("corr").get<std::vector<std::vector<double>>>();
  return m;
}

std::vector<std::vector<double>> cholesky(
    const std::vector<std::vector<double>>& m) {
  std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw EvalError("correlation matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::fabs(m[i][j] - m[j][i]) > 1e-12)
        throw EvalError("correlation matrix is not symmetric");
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (s <= 0.0)
          throw EvalError("correlation matrix is not positive definite");
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  return l;
}

namespace {

// philox2x64-10
constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ULL;

inline void philoxRound(std::uint64_t& c0, std::uint64_t& c1,
                        std::uint64_t key) {
  unsigned __int128 prod = static_cast<unsigned __int128>(kPhiloxM) * c0;
  std::uint64_t lo = static_cast<std::uint64_t>(prod);
  std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
  c0 = hi ^ key ^ c1;
  c1 = lo;
}

std::uint64_t philox(std::uint64_t key, std::uint64_t c0, std::uint64_t c1) {
  for (int r = 0; r < 10; ++r) {
    philoxRound(c0, c1, key);
    key += kPhiloxW;
  }
  return c0 ^ c1;
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t i) const {
  return philox(seed_, i, path_);
}

double CounterRng::uniform(std::uint64_t i) const {
  // (0,1): 53 mantissa bits centered in the bin, never exactly 0 or 1.
  return (static_cast<double>(bits(i) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t i) const {
  return invNormalCdf(uniform(i));
}

double normalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double invNormalCdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw EvalError("invNormalCdf domain error");
  // Acklam's rational approximation, then one Newton step against the
  // erfc-based CDF.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double e = normalCdf(x) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);  // Halley step
}

double blackScholesCall(double spot, double strike, double rate, double vol,
                        double tYears) {
  if (tYears <= 0.0) return std::max(spot - strike, 0.0);
  double sd = vol * std::sqrt(tYears);
  double d1 = (std::log(spot / strike) + (rate + 0.5 * vol * vol) * tYears) /
              sd;
  double d2 = d1 - sd;
  return spot * normalCdf(d1) -
         strike * std::exp(-rate * tYears) * normalCdf(d2);
}

nlohmann::json priceResultToJson(const PriceResult& r) {
  return {{"price", r.price},
          {"stdError", r.stdError},
          {"paths", r.paths},
          {"seed", r.seed},
          {"valuationDay", r.valuationDay}};
}

namespace {

// Sampling plan shared by all paths: which model asset backs each kernel
// column, the sorted distinct sampling days, and the correlation factor.
struct SimPlan {
  const Kernel& k;
  const ModelSpec& model;
  std::vector<std::int64_t> days;       // sorted distinct row days
  std::vector<std::size_t> rowToDay;    // kernel row -> days index
  std::vector<std::size_t> colToAsset;  // kernel col -> model order index
  std::vector<std::vector<double>> chol;
  std::vector<double> disc;  // per-row discount factors

  SimPlan(const Kernel& kernel, const ModelSpec& m) : k(kernel), model(m) {
    days = k.rows;
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    if (!days.empty() && days.front() < 0)
      throw EvalError("cannot simulate a negative observation day");
    rowToDay.reserve(k.rows.size());
    for (std::int64_t d : k.rows)
      rowToDay.push_back(static_cast<std::size_t>(
          std::lower_bound(days.begin(), days.end(), d) - days.begin()));
    for (const auto& label : k.cols) {
      auto it = std::find(model.order.begin(), model.order.end(), label);
      if (it == model.order.end())
        throw EvalError("model has no asset spec for label " + label);
      colToAsset.push_back(
          static_cast<std::size_t>(it - model.order.begin()));
    }
    if (model.corr.empty()) {
      std::size_t n = model.order.size();
      chol.assign(n, std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i) chol[i][i] = 1.0;
    } else {
      if (model.corr.size() != model.order.size())
        throw EvalError("correlation matrix size does not match asset count");
      chol = cholesky(model.corr);
    }
    disc.reserve(k.rows.size());
    for (std::int64_t d : k.rows)
      disc.push_back(
          std::exp(-model.rate * static_cast<double>(d) / model.dayCount));
  }

  std::vector<std::vector<double>> path(std::uint64_t seed,
                                        std::uint64_t p) const {
    CounterRng rng(seed, p);
    std::size_t nAssets = model.order.size();
    std::vector<double> logS(nAssets);
    for (std::size_t j = 0; j < nAssets; ++j)
      logS[j] = std::log(model.at(model.order[j]).spot);

    std::vector<std::vector<double>> atDay(days.size(),
                                           std::vector<double>(nAssets));
    std::vector<double> raw(nAssets), z(nAssets);
    std::int64_t prev = 0;
    for (std::size_t s = 0; s < days.size(); ++s) {
      double dt = static_cast<double>(days[s] - prev) / model.dayCount;
      prev = days[s];
      if (dt > 0.0) {
        for (std::size_t j = 0; j < nAssets; ++j)
          raw[j] = rng.normal(s * nAssets + j);
        for (std::size_t j = 0; j < nAssets; ++j) {
          double acc = 0.0;
          for (std::size_t l = 0; l <= j; ++l) acc += chol[j][l] * raw[l];
          z[j] = acc;
        }
        for (std::size_t j = 0; j < nAssets; ++j) {
          const AssetSpec& a = model.at(model.order[j]);
          logS[j] += (a.drift - 0.5 * a.vol * a.vol) * dt +
                     a.vol * std::sqrt(dt) * z[j];
        }
      }
      for (std::size_t j = 0; j < nAssets; ++j)
        atDay[s][j] = std::exp(logS[j]);
    }

    std::vector<std::vector<double>> ext(k.rows.size(),
                                         std::vector<double>(k.cols.size()));
    for (std::size_t r = 0; r < k.rows.size(); ++r)
      for (std::size_t c = 0; c < k.cols.size(); ++c)
        ext[r][c] = atDay[rowToDay[r]][colToAsset[c]];
    return ext;
  }
};

// Fixed-order pairwise summation: independent of thread count and stable
// for large path counts.
double pairwiseSum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwiseSum(v, half) + pairwiseSum(v + half, n - half);
}

void runParallel(std::uint64_t paths, unsigned threads,
                 const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, std::max<std::uint64_t>(paths, 1)));
  if (threads <= 1) {
    fn(0, paths);
    return;
  }
  std::vector<std::thread> pool;
  std::uint64_t chunk = (paths + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::uint64_t lo = t * chunk;
    std::uint64_t hi = std::min(paths, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

PriceResult reduce(const std::vector<double>& payoffs, std::uint64_t seed,
                   std::uint64_t day) {
  PriceResult r;
  r.paths = payoffs.size();
  r.seed = seed;
  r.valuationDay = day;
  double n = static_cast<double>(payoffs.size());
  double sum = pairwiseSum(payoffs.data(), payoffs.size());
  r.price = sum / n;
  if (payoffs.size() > 1) {
    std::vector<double> sq(payoffs.size());
    for (std::size_t i = 0; i < payoffs.size(); ++i) {
      double d = payoffs[i] - r.price;
      sq[i] = d * d;
    }
    double var = pairwiseSum(sq.data(), sq.size()) / (n - 1.0);
    r.stdError = std::sqrt(var / n);
  }
  return r;
}

}  // namespace

std::vector<std::vector<double>> simulatePath(const Kernel& k,
                                              const ModelSpec& model,
                                              std::uint64_t seed,
                                              std::uint64_t path) {
  return SimPlan(k, model).path(seed, path);
}

PriceResult priceMC(const Kernel& k, const ModelSpec& model,
                    std::uint64_t paths, std::uint64_t seed,
                    std::uint64_t valuationDay, const TEnv& tenv,
                    unsigned threads) {
  std::vector<PriceResult> out =
      priceAcrossTime(k, model, paths, seed, {valuationDay}, tenv, threads);
  return out.front();
}

std::vector<PriceResult> priceAcrossTime(const Kernel& k,
                                         const ModelSpec& model,
                                         std::uint64_t paths,
                                         std::uint64_t seed,
                                         const std::vector<std::uint64_t>& days,
                                         const TEnv& tenv,
                                         unsigned threads) {
  if (paths == 0) throw EvalError("path count must be positive");
  SimPlan plan(k, model);
  std::vector<std::uint64_t> tenvVec;
  tenvVec.reserve(k.tvars.size());
  for (const auto& v : k.tvars) tenvVec.push_back(tenv.lookup(v));

  std::vector<std::vector<double>> payoffs(
      days.size(), std::vector<double>(paths, 0.0));
  const Party p1 = k.parties.size() > 0 ? k.parties[0] : "you";
  const Party p2 = k.parties.size() > 1 ? k.parties[1] : "me";

  std::exception_ptr err;
  std::mutex errMu;
  runParallel(paths, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    try {
      KernelInput in;
      in.tenv = tenvVec;
      in.disc = plan.disc;
      for (std::uint64_t p = lo; p < hi; ++p) {
        in.ext = plan.path(seed, p);
        for (std::size_t d = 0; d < days.size(); ++d) {
          in.tNow = days[d];
          payoffs[d][p] = evalKernel(k, in, p1, p2);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> g(errMu);
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);

  std::vector<PriceResult> out;
  out.reserve(days.size());
  for (std::size_t d = 0; d < days.size(); ++d)
    out.push_back(reduce(payoffs[d], seed, days[d]));
  return out;
}

}  // namespace cltk
