#pragma once

#include <cstdint>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cltk/env.hpp"
#include "cltk/il.hpp"

namespace cltk {

// Kernel expression: a payoff expression with every environment access
// rewritten to dense array coordinates. Row references are relative to the
// enclosing loop offset at evaluation time.
struct KExpr;
using KPtr = std::shared_ptr<const KExpr>;

struct KExpr {
  struct If {
    KPtr cond;
    KPtr thenE;
    KPtr elseE;
  };
  struct FloatLit {
    double value;
  };
  struct NatLit {
    std::uint64_t value;
  };
  struct BoolLit {
    bool value;
  };
  struct Now {};
  // The day number stored at the referenced row (cutPayoff guards compare
  // it with t_now).
  struct TimeRef {
    std::size_t row;
  };
  struct ObsRef {
    std::size_t row;
    std::size_t col;
  };
  struct PayRef {
    std::size_t row;
    Party from;
    Party to;
  };
  struct UnOp {
    ILUnOp op;
    KPtr arg;
  };
  struct BinOp {
    ILBinOp op;
    KPtr left;
    KPtr right;
  };
  struct LoopIf {
    KPtr cond;
    KPtr thenE;
    KPtr elseE;
    std::uint64_t window;
    // Set when the source window was a template variable; used by the
    // emitted source, which reads the window from the tenv array.
    std::optional<std::size_t> windowVarIndex;
  };

  std::variant<If, FloatLit, NatLit, BoolLit, Now, TimeRef, ObsRef, PayRef,
               UnOp, BinOp, LoopIf>
      node;
};

// Flattened payoff: the pricing-engine input.
struct Kernel {
  KPtr body;
  std::vector<std::int64_t> rows;  // absolute observation/payment days
  std::vector<std::string> cols;   // observable labels
  std::vector<std::string> tvars;  // tenv array layout
  std::vector<Party> parties;      // distinct parties, first occurrence
  std::uint64_t horizon = 0;       // days; meta only
};

struct KernelInput {
  std::vector<std::vector<double>> ext;  // [row][col]
  std::vector<std::uint64_t> tenv;       // template-variable values
  std::vector<double> disc;              // per-row discount factors
  std::uint64_t tNow = 0;
};

struct UnsupportedDynamicRow : EvalError {
  explicit UnsupportedDynamicRow(const std::string& msg) : EvalError(msg) {}
};

// Rewrite environment accesses to dense coordinates. Rows are the distinct
// absolute days in first-occurrence order; days reachable through a loop
// window are materialized as contiguous row blocks.
Kernel reindex(const ILPtr& il, const TEnv& tenv);

double evalKernel(const Kernel& k, const KernelInput& in, const Party& p1,
                  const Party& p2);

// Build a KernelInput by sampling an environment/discount at the kernel's
// rows and cols.
KernelInput sampleKernelInput(const Kernel& k, const ExtEnv& env,
                              const Discount& disc, std::uint64_t tNow,
                              const TEnv& tenv);

// Deterministic textual form of a kernel (grammar in docs/kernel-format.md).
std::string emitKernelSource(const Kernel& k);

// Readable functional-style source for a payoff expression, for human
// inspection and golden-file tests.
std::string emitFunctionalSource(const ILPtr& il);

// Reference interpreter for emitted kernel source.
double
interpretKernelSource(const std::string& source, const KernelInput& in,
                      const Party& p1, const Party& p2);

nlohmann::json kernelToJson(const Kernel& k);
Kernel kernelFromJson(const nlohmann::json& j);

}  // namespace cltk
