// Python module: rule sets, sessions, replay, diagrams and the request
// dispatcher. Structured values cross the boundary as JSON-compatible
// Python objects (dict, list, str, int, bool, None).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tggdbg/conformance.hpp"
#include "tggdbg/diagram.hpp"
#include "tggdbg/errors.hpp"
#include "tggdbg/serialization.hpp"
#include "tggdbg/server.hpp"
#include "tggdbg/view.hpp"

namespace py = pybind11;
using namespace tgg;

namespace {

py::object toPython(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json fromPython(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return Json::parse(obj.cast<std::string>());
  return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

/// Accepts a triple document as text or as an already parsed object.
std::string documentText(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  return py::module_::import("json").attr("dumps")(obj).cast<std::string>();
}

DisplayOptions optionsArg(const py::object& obj) {
  return obj.is_none() ? DisplayOptions{} : displayOptionsFromJson(fromPython(obj), "");
}

using RuleSetPtr = std::shared_ptr<const RuleSet>;

struct PyRuleSet {
  RuleSetPtr rs;
};

struct PySession {
  Session session;
};

PyRuleSet ruleSetFromText(const std::string& text) { return {std::make_shared<const RuleSet>(loadRuleSet(text))}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Triple graph grammar engine and step debugger";

  static py::exception<Error> tggError(m, "TggError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = tggError;
      PyErr_SetObject(err.ptr(), py::make_tuple(e.what(), std::string(toString(e.code())), e.path()).ptr());
    }
  });

  py::class_<PyRuleSet>(m, "RuleSet")
      .def_static("from_text", &ruleSetFromText, py::arg("text"))
      .def_static("from_file", [](const std::string& path) { return ruleSetFromText(readFile(path)); },
                  py::arg("path"))
      .def_property_readonly("name", [](const PyRuleSet& r) { return r.rs->name; })
      .def_property_readonly("rule_names", [](const PyRuleSet& r) { return r.rs->ruleNames(); })
      .def("to_text", [](const PyRuleSet& r) { return saveRuleSet(*r.rs); })
      .def(
          "check_triple",
          [](const PyRuleSet& r, const py::object& triple) {
            const TripleGraph g = tripleFromJson(openDocument(documentText(triple), DocumentKind::Triple), "/payload");
            py::list out;
            for (const auto& v : checkConformance(g, r.rs->metamodel)) {
              py::dict d;
              d["kind"] = std::string(toString(v.kind));
              d["elements"] = v.elementIds;
              d["message"] = v.message;
              out.append(d);
            }
            return out;
          },
          py::arg("triple"), "Metamodel violations of a triple document")
      .def(
          "rule_diagram",
          [](const PyRuleSet& r, const std::string& rule, const py::object& options, const std::string& format) {
            const TGGRule* found = r.rs->findRule(rule);
            if (found == nullptr) throw Error(ErrorCode::Argument, "unknown rule '" + rule + "'");
            return renderDiagram(buildRuleView(*found, optionsArg(options)), diagramFormatFromString(format));
          },
          py::arg("rule"), py::arg("options") = py::none(), py::arg("format") = "puml");

  py::class_<PySession>(m, "Session")
      .def(py::init([](const PyRuleSet& r, const std::string& kind, const py::object& input, std::uint64_t seed) {
             TripleGraph g;
             if (!input.is_none()) g = loadTriple(documentText(input), r.rs->metamodel);
             return PySession{Session::create(r.rs, operationKindFromString(kind), std::move(g), seed)};
           }),
           py::arg("ruleset"), py::arg("kind") = "GEN", py::arg("input") = py::none(), py::arg("seed") = 0)
      .def_static("load", [](const std::string& text) { return PySession{loadSession(text)}; }, py::arg("text"))
      .def("save", [](const PySession& s) { return saveSession(s.session); })
      .def("overview", [](const PySession& s) { return toPython(toJson(s.session.overview())); })
      .def(
          "matches",
          [](const PySession& s, const std::optional<std::string>& rule) {
            Json out = Json::array();
            const auto names = rule ? std::vector<std::string>{*rule} : s.session.ruleset().ruleNames();
            for (const auto& name : names) {
              for (const auto& match : s.session.matchesFor(name)) out.push_back(toJson(match));
            }
            return toPython(out);
          },
          py::arg("rule") = py::none())
      .def("apply", [](PySession& s, const std::string& id) { return toPython(toJson(s.session.applyMatch(id))); },
           py::arg("match_id"))
      .def(
          "apply_random",
          [](PySession& s, const std::optional<std::string>& rule) {
            return toPython(toJson(s.session.applyRandomMatch(rule)));
          },
          py::arg("rule") = py::none())
      .def("run", [](PySession& s, std::size_t maxSteps) { return toPython(toJson(s.session.runBackground(maxSteps))); },
           py::arg("max_steps"))
      .def(
          "set_breakpoint",
          [](PySession& s, const std::string& kind, const std::string& rule, std::uint64_t n) {
            s.session.setBreakpoint({breakpointKindFromString(kind), rule, n, true});
          },
          py::arg("kind"), py::arg("rule") = "", py::arg("n") = 0)
      .def(
          "clear_breakpoint",
          [](PySession& s, const std::string& kind, const std::string& rule, std::uint64_t n) {
            return s.session.clearBreakpoint({breakpointKindFromString(kind), rule, n, true});
          },
          py::arg("kind"), py::arg("rule") = "", py::arg("n") = 0)
      .def("triple", [](const PySession& s) { return saveTriple(s.session.triple()); })
      .def("protocol", [](const PySession& s) { return saveProtocol(protocolOf(s.session)); })
      .def("unmarked", [](const PySession& s) { return s.session.unmarkedElements(); })
      .def_property_readonly("mode", [](const PySession& s) { return std::string(toString(s.session.mode())); })
      .def(
          "protocol_diagram",
          [](const PySession& s, const std::vector<std::size_t>& select, const py::object& options,
             const std::string& format) {
            const auto& st = s.session.state();
            const std::set<std::size_t> sel(select.begin(), select.end());
            return renderDiagram(buildProtocolView(*st.ruleset, st.initial, st.protocol, sel, optionsArg(options)),
                                 diagramFormatFromString(format));
          },
          py::arg("select"), py::arg("options") = py::none(), py::arg("format") = "puml");

  m.def(
      "replay",
      [](const PyRuleSet& r, const std::string& protocol, std::size_t count) {
        const ProtocolDocument doc = loadProtocol(protocol, *r.rs);
        return saveTriple(replay(*r.rs, doc.initial, doc.applications, count).triple);
      },
      py::arg("ruleset"), py::arg("protocol"), py::arg("count"),
      "Triple document after the first `count` protocol entries");

  py::class_<DebugServer>(m, "DebugServer")
      .def(py::init([](const PySession& s) { return std::make_unique<DebugServer>(s.session); }), py::arg("session"))
      .def(
          "handle_line",
          [](DebugServer& server, const std::string& line) { return server.handleLine(line); }, py::arg("line"),
          "Output lines (response, then event if any) for one NDJSON request line");

  m.attr("PROTOCOL_VERSION") = std::string(kProtocolVersion);
}
