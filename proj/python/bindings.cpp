#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "smtquery/harness.hpp"
#include "smtquery/intel.hpp"
#include "smtquery/qlang.hpp"
#include "smtquery/smtlib.hpp"
#include "smtquery/transforms.hpp"

namespace py = pybind11;
using namespace smtquery;

namespace {

Script parse(const std::string& text, bool translate25) {
  ParseOptions opts;
  opts.translate25 = translate25;
  return parseScript(text, opts);
}

py::dict kindsDict(Script& s) {
  auto k = constraintKinds(s);
  py::dict d;
  d["hasWEQ"] = k.hasWEQ;
  d["hasRegex"] = k.hasRegex;
  d["hasLinears"] = k.hasLinears;
  d["hasHigherOrder"] = k.hasHigherOrder;
  return d;
}

py::dict regexDict(Script& s) {
  auto r = regexClassification(s);
  py::dict d;
  d["onlyMembership"] = r.onlyMembership;
  d["simpleLHS"] = r.simpleLHS;
  d["concatLHS"] = r.concatLHS;
  d["usesComplementOrInter"] = r.usesComplementOrInter;
  d["membershipCount"] = r.membershipCount;
  return d;
}

bool evalStructural(Script& s, const std::string& name) {
  for (const auto& p : predicateCatalog())
    if (p.name == name && p.arity != 0)
      throw py::value_error(name + " needs solver results; only structural "
                                   "predicates can run on a bare script");
  EvalContext ctx;
  ctx.script = [&]() -> Script& { return s; };
  PredicateCall call{name, {}};
  return evalPredicate(call, ctx);
}

std::string runQueryText(const std::string& query, const std::string& dbPath,
                         const std::string& outputDir,
                         const std::string& solversConf, int jobs) {
  Store store(dbPath);
  std::ostringstream out, err;
  QueryEnv env;
  env.store = &store;
  env.out = &out;
  env.err = &err;
  env.outputDir = outputDir;
  env.jobs = jobs;
  if (!solversConf.empty()) env.solvers = loadSolverConfigs(solversConf);
  env.scheduleOnDemand = !env.solvers.empty();
  runQuery(parseQuery(query), env);
  return out.str() + err.str();
}

}  // namespace

PYBIND11_MODULE(_smtquery, m) {
  m.doc() = "String-constraint benchmark analysis: parsing, analyses, "
            "transforms, storage, and the query language";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SyntaxError>(m, "QuerySyntaxError", PyExc_ValueError);
  py::register_exception<UnknownTransform>(m, "UnknownTransform",
                                           PyExc_ValueError);
  py::register_exception<UnknownPredicate>(m, "UnknownPredicate",
                                           PyExc_ValueError);

  py::class_<Script>(m, "Script")
      .def_property_readonly(
          "logic",
          [](const Script& s) { return s.logic; })
      .def_property_readonly(
          "declarations",
          [](const Script& s) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& [name, sort] : s.declarations)
              out.emplace_back(name, sortName(sort));
            return out;
          })
      .def_property_readonly(
          "num_assertions",
          [](const Script& s) { return s.assertions.size(); })
      .def("__str__", [](const Script& s) { return printScript(s); })
      .def("__repr__", [](const Script& s) {
        return "<Script with " + std::to_string(s.assertions.size()) +
               " assertion(s)>";
      });

  m.def("translate_25_to_26", &translate25to26, py::arg("text"),
        "Rewrite legacy dialect keywords and escapes to the current form");
  m.def("parse_script", &parse, py::arg("text"),
        py::arg("translate25") = false);
  m.def("print_script",
        [](const Script& s) { return printScript(s); });
  m.def("content_hash",
        [](const std::string& bytes) { return contentHash(bytes); },
        py::arg("data"), "SHA-256 hex digest");
  m.def("structural_equal",
        [](const Script& a, const Script& b) { return structuralEqual(a, b); });

  m.def("variable_counts",
        [](Script& s) { return variableCounts(s); });
  m.def("constraint_kinds", &kindsDict);
  m.def("regex_classification", &regexDict);
  m.def("upper_bounds", [](const Script& s) { return upperBounds(s); });
  m.def("var_dep_edges", &varDepEdges,
        "(variable, assertion index) incidence pairs, indices from 1");

  m.def("transform_catalog",
        []() { return transformCatalog(); });
  m.def("apply_transform",
        [](const std::string& name, const Script& s) {
          return applyTransform(transformByName(name), s);
        },
        py::arg("name"), py::arg("script"));

  m.def("predicate_catalog", []() {
    std::vector<std::tuple<std::string, int, std::string>> out;
    for (const auto& p : predicateCatalog())
      out.emplace_back(p.name, p.arity, p.description);
    return out;
  });
  m.def("eval_structural_predicate", &evalStructural, py::arg("script"),
        py::arg("name"));

  m.def("extractor_catalog", []() { return extractorCatalog(); });

  py::class_<Store>(m, "Store")
      .def(py::init([](const std::string& path) {
        return std::make_unique<Store>(path);
      }))
      .def("has_schema", &Store::hasSchema)
      .def("init_schema", &Store::initSchema, py::arg("force") = false)
      .def("allocate_new",
           [](Store& s, const std::string& root) {
             return s.allocateNew(root);
           },
           py::arg("root"))
      .def("row_count", &Store::rowCount, py::arg("table"));

  m.def("run_query", &runQueryText, py::arg("query"), py::arg("db"),
        py::arg("output_dir") = "output", py::arg("solvers_conf") = "",
        py::arg("jobs") = 1,
        "Run one query against an initialized database and return its "
        "printed output");
}
