#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cltk/errors.hpp"

namespace cltk {

// Value of the contract expression sublanguage: Real or Bool.
using Value = std::variant<double, bool>;

inline bool isReal(const Value& v) { return std::holds_alternative<double>(v); }
inline double asReal(const Value& v) {
  if (!isReal(v)) throw TypeError("expected a Real value");
  return std::get<double>(v);
}
inline bool asBool(const Value& v) {
  if (isReal(v)) throw TypeError("expected a Bool value");
  return std::get<bool>(v);
}

// Template environment: total mapping from template variable to natural.
class TEnv {
 public:
  TEnv() = default;
  explicit TEnv(std::map<std::string, std::uint64_t> m) : map_(std::move(m)) {}

  std::uint64_t lookup(const std::string& name) const {
    auto it = map_.find(name);
    if (it == map_.end()) throw UnboundTemplateVar(name);
    return it->second;
  }
  void bind(const std::string& name, std::uint64_t v) { map_[name] = v; }
  const std::map<std::string, std::uint64_t>& entries() const { return map_; }

 private:
  std::map<std::string, std::uint64_t> map_;
};

// External observable environment. Two modes:
//  - partial: backed by explicit per-day values; a miss is an error
//  - total: backed by a pure function of (label, day), used by the
//    property-test generators
// A shift offset makes env/n denote lambda (l,i). env(l, i+n); shifting is
// additive.
class ExtEnv {
 public:
  using TotalFn = std::function<Value(const std::string&, std::int64_t)>;

  ExtEnv() : impl_(std::make_shared<Impl>()) {}

  static ExtEnv partial(
      std::map<std::pair<std::string, std::int64_t>, Value> values) {
    ExtEnv e;
    e.impl_->values = std::move(values);
    return e;
  }
  static ExtEnv total(TotalFn fn) {
    ExtEnv e;
    e.impl_->fn = std::move(fn);
    return e;
  }

  Value lookup(const std::string& label, std::int64_t day) const {
    std::int64_t abs = day + shift_;
    if (impl_->fn) return impl_->fn(label, abs);
    auto it = impl_->values.find({label, abs});
    if (it == impl_->values.end()) throw MissingObservable(label, abs);
    return it->second;
  }

  ExtEnv shifted(std::int64_t n) const {
    ExtEnv e = *this;
    e.shift_ += n;
    return e;
  }

  bool isTotal() const { return static_cast<bool>(impl_->fn); }

 private:
  struct Impl {
    std::map<std::pair<std::string, std::int64_t>, Value> values;
    TotalFn fn;
  };
  std::shared_ptr<Impl> impl_;
  std::int64_t shift_ = 0;
};

// Stack of bound expression variables, innermost binding last.
class VarEnv {
 public:
  const Value* find(const std::string& name) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
  void push(const std::string& name, Value v) { stack_.emplace_back(name, v); }
  void pop() { stack_.pop_back(); }

 private:
  std::vector<std::pair<std::string, Value>> stack_;
};

// Discount function d : day -> factor, with a shift d/n = lambda t. d(t+n).
class Discount {
 public:
  Discount() = default;

  // d(t) = exp(-r * t / dayCount)
  static Discount flatRate(double r, double dayCount = 365.0) {
    Discount d;
    d.rate_ = r;
    d.dayCount_ = dayCount;
    return d;
  }
  static Discount table(std::vector<double> factors) {
    Discount d;
    d.table_ = std::make_shared<std::vector<double>>(std::move(factors));
    return d;
  }

  double operator()(std::uint64_t t) const {
    std::int64_t abs = static_cast<std::int64_t>(t) + shift_;
    if (table_) {
      if (abs < 0 || static_cast<std::size_t>(abs) >= table_->size())
        throw EvalError("discount table has no entry for day " +
                        std::to_string(abs));
      return (*table_)[static_cast<std::size_t>(abs)];
    }
    return std::exp(-rate_ * static_cast<double>(abs) / dayCount_);
  }

  Discount shifted(std::int64_t n) const {
    Discount d = *this;
    d.shift_ += n;
    return d;
  }

 private:
  double rate_ = 0.0;
  double dayCount_ = 365.0;
  std::shared_ptr<std::vector<double>> table_;
  std::int64_t shift_ = 0;
};

}  // namespace cltk
