// Python bindings for the contract toolkit: parse, instantiate, compile,
// emit kernels, and price. Structured data crosses the boundary as JSON
// strings to keep the surface small and schema-stable with the CLI.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cltk/checks.hpp"
#include "cltk/compile.hpp"
#include "cltk/json_io.hpp"
#include "cltk/kernel.hpp"
#include "cltk/parser.hpp"
#include "cltk/pricing.hpp"
#include "cltk/printer.hpp"
#include "cltk/semantics.hpp"

namespace py = pybind11;
using namespace cltk;

namespace {

TEnv tenvFromDict(const py::dict& d) {
  TEnv t;
  for (auto item : d)
    t.bind(py::cast<std::string>(item.first),
           py::cast<std::uint64_t>(item.second));
  return t;
}

struct PyContract {
  ContrPtr c;
};
struct PyPayoff {
  ILPtr il;
};
struct PyKernel {
  Kernel k;
};

}  // namespace

PYBIND11_MODULE(_cltk, m) {
  m.doc() = "Contract language toolkit: compile declarative financial "
            "contracts to payoff kernels and price them by Monte Carlo.";

  auto base = py::register_exception<Error>(m, "ContractError");
  py::register_exception<ParseError>(m, "ContractParseError", base);
  py::register_exception<TypeError>(m, "ContractTypeError", base);

  py::class_<PyContract>(m, "Contract")
      .def("__str__", [](const PyContract& s) { return printContract(s.c); })
      .def("to_json",
           [](const PyContract& s) { return contractToJson(s.c).dump(); })
      .def("horizon",
           [](const PyContract& s, const py::dict& tenv) {
             return horizon(s.c, tenvFromDict(tenv));
           },
           py::arg("tenv") = py::dict())
      .def("is_template_closed",
           [](const PyContract& s) { return isTemplateClosed(s.c); })
      .def("instantiate", [](const PyContract& s, const py::dict& tenv) {
        return PyContract{instantiate(s.c, tenvFromDict(tenv))};
      });

  py::class_<PyPayoff>(m, "Payoff")
      .def("__str__", [](const PyPayoff& s) { return printIL(s.il); })
      .def("to_json", [](const PyPayoff& s) { return ilToJson(s.il).dump(); })
      .def("cut", [](const PyPayoff& s) { return PyPayoff{cutPayoff(s.il)}; });

  py::class_<PyKernel>(m, "Kernel")
      .def_property_readonly(
          "rows", [](const PyKernel& s) { return s.k.rows; })
      .def_property_readonly(
          "cols", [](const PyKernel& s) { return s.k.cols; })
      .def("source", [](const PyKernel& s) { return emitKernelSource(s.k); });

  m.def("parse_contract",
        [](const std::string& src) {
          ContrPtr c = parseContract(src);
          typeCheckContr(TypeCtx{}, c);
          return PyContract{c};
        },
        py::arg("source"));
  m.def("contract_from_json", [](const std::string& j) {
    return PyContract{contractFromJson(Json::parse(j))};
  });

  m.def("compile_contract",
        [](const PyContract& c, bool cut) {
          ILPtr il = compileContract(c.c);
          return PyPayoff{cut ? cutPayoff(il) : il};
        },
        py::arg("contract"), py::arg("cut") = true);

  m.def("emit_kernel",
        [](const PyPayoff& p, const py::dict& tenv) {
          return PyKernel{reindex(p.il, tenvFromDict(tenv))};
        },
        py::arg("payoff"), py::arg("tenv") = py::dict());

  m.def("price",
        [](const PyKernel& k, const std::string& modelJson,
           std::uint64_t paths, std::uint64_t seed,
           const std::vector<std::uint64_t>& days, const py::dict& tenv,
           unsigned threads) {
          ModelSpec model = modelFromJson(nlohmann::json::parse(modelJson));
          py::list out;
          for (const PriceResult& r :
               priceAcrossTime(k.k, model, paths, seed, days, tenvFromDict(tenv),
                               threads)) {
            py::dict d;
            d["price"] = r.price;
            d["std_error"] = r.stdError;
            d["paths"] = r.paths;
            d["seed"] = r.seed;
            d["valuation_day"] = r.valuationDay;
            out.append(d);
          }
          return out;
        },
        py::arg("kernel"), py::arg("model"), py::arg("paths") = 100000,
        py::arg("seed") = 0,
        py::arg("days") = std::vector<std::uint64_t>{0},
        py::arg("tenv") = py::dict(), py::arg("threads") = 0);

  m.def("black_scholes_call", &blackScholesCall, py::arg("spot"),
        py::arg("strike"), py::arg("rate"), py::arg("vol"), py::arg("expiry"));

  m.def("verify",
        [](const std::string& property, std::uint64_t cases,
           std::uint64_t seed) {
          CheckStats s;
          if (property == "soundness")
            s = checkCompileSoundness(seed, cases, nullptr);
          else if (property == "totality")
            s = checkTotality(seed, cases, nullptr);
          else if (property == "cut")
            s = checkCutPayoffAllN(seed, cases, nullptr);
          else if (property == "commuting")
            s = checkCommutingDiagramNs(seed, cases, nullptr);
          else if (property == "instantiation")
            s = checkInstantiation(seed, cases, nullptr);
          else
            throw py::value_error(
                "property must be one of: soundness, totality, cut, "
                "commuting, instantiation");
          py::dict d;
          d["cases"] = s.cases;
          d["failures"] = s.failures;
          d["passed"] = s.allPassed();
          return d;
        },
        py::arg("property"), py::arg("cases") = 100, py::arg("seed") = 1);
}
