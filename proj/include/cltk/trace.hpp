#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cltk/ast.hpp"

namespace cltk {

// Per-day transfer map. Antisymmetric by construction: entries are stored
// under the lexicographically ordered party pair with a signed amount, so
// amount(p,q,a) = -amount(q,p,a) and amount(p,p,a) = 0 always hold.
class Trans {
 public:
  using Key = std::tuple<Party, Party, Asset>;

  void add(const Party& from, const Party& to, const Asset& asset,
           double amount) {
    if (from == to || amount == 0.0) return;
    if (from < to)
      map_[{from, to, asset}] += amount;
    else
      map_[{to, from, asset}] -= amount;
  }

  double get(const Party& from, const Party& to, const Asset& asset) const {
    if (from == to) return 0.0;
    if (from < to) {
      auto it = map_.find({from, to, asset});
      return it == map_.end() ? 0.0 : it->second;
    }
    auto it = map_.find({to, from, asset});
    return it == map_.end() ? 0.0 : -it->second;
  }

  // Sum over all assets, per the asset-erased view used by the soundness
  // theorems.
  double getAllAssets(const Party& from, const Party& to) const {
    if (from == to) return 0.0;
    double sum = 0.0;
    for (const auto& [k, v] : map_) {
      if (std::get<0>(k) == from && std::get<1>(k) == to) sum += v;
      if (std::get<0>(k) == to && std::get<1>(k) == from) sum -= v;
    }
    return sum;
  }

  Trans scaled(double f) const {
    Trans t;
    for (const auto& [k, v] : map_) {
      double s = v * f;
      if (s != 0.0) t.map_[k] = s;
    }
    return t;
  }

  Trans& operator+=(const Trans& other) {
    for (const auto& [k, v] : other.map_) map_[k] += v;
    return *this;
  }

  bool isZero() const {
    for (const auto& [k, v] : map_)
      if (v != 0.0) return false;
    return true;
  }

  // Entries in canonical (from < to) order.
  const std::map<Key, double>& entries() const { return map_; }

  friend bool operator==(const Trans& a, const Trans& b) {
    // Compare ignoring explicit zeros.
    for (const auto& [k, v] : a.map_)
      if (v != b.get(std::get<0>(k), std::get<1>(k), std::get<2>(k)))
        return false;
    for (const auto& [k, v] : b.map_)
      if (v != a.get(std::get<0>(k), std::get<1>(k), std::get<2>(k)))
        return false;
    return true;
  }

 private:
  std::map<Key, double> map_;
};

// Day-indexed sequence of Trans with finite support; days beyond the stored
// range denote the empty transfer.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::size_t days) : days_(days) {}

  const Trans& at(std::size_t t) const {
    static const Trans kZero;
    return t < days_.size() ? days_[t] : kZero;
  }
  Trans& day(std::size_t t) {
    if (t >= days_.size()) days_.resize(t + 1);
    return days_[t];
  }
  std::size_t support() const { return days_.size(); }

  Trace scaled(double f) const {
    Trace tr;
    tr.days_.reserve(days_.size());
    for (const auto& d : days_) tr.days_.push_back(d.scaled(f));
    return tr;
  }

  Trace& operator+=(const Trace& other) {
    if (other.days_.size() > days_.size()) days_.resize(other.days_.size());
    for (std::size_t i = 0; i < other.days_.size(); ++i)
      days_[i] += other.days_[i];
    return *this;
  }

 private:
  std::vector<Trans> days_;
};

// delay(n, tr): every transfer happens n days later.
inline Trace delay(std::uint64_t n, const Trace& tr) {
  Trace out;
  for (std::size_t i = 0; i < tr.support(); ++i) {
    const Trans& d = tr.at(i);
    if (!d.isZero()) out.day(i + n) = d;
  }
  // Preserve support length so equality checks over [0, horizon) behave.
  if (tr.support() > 0) out.day(tr.support() - 1 + n);
  return out;
}

}  // namespace cltk
