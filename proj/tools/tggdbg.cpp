// Command line front end: validation, batch transformations, replay,
// diagram export and the debug server.

#include <csignal>
#include <sstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "tggdbg/conformance.hpp"
#include "tggdbg/diagram.hpp"
#include "tggdbg/engine.hpp"
#include "tggdbg/errors.hpp"
#include "tggdbg/serialization.hpp"
#include "tggdbg/server.hpp"
#include "tggdbg/view.hpp"

namespace {

using namespace tgg;

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kFormat = 3 };

int exitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation:
    case ErrorCode::StaleMatch:
    case ErrorCode::NoMatch:
      return kFailed;
    case ErrorCode::Argument:
    case ErrorCode::Lookup:
      return kUsage;
    default:
      return kFormat;
  }
}

struct Options {
  std::string ruleset;
  std::string input;
  std::string out;
  std::string protocol;
  std::string rule;
  std::string select;
  std::string options;
  std::string format = "puml";
  std::string mode = "fwd";
  std::uint64_t seed = 0;
  std::size_t maxSteps = 0;
  std::size_t at = 0;
  std::uint16_t port = 8765;
  bool json = false;
};

std::shared_ptr<const RuleSet> readRuleSet(const std::string& path) {
  return std::make_shared<const RuleSet>(loadRuleSet(readFile(path)));
}

/// Parses "3", "0,2,5", "1..4" and combinations such as "0,3..5".
std::set<std::size_t> parseSelection(const std::string& text) {
  std::set<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  auto number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::Argument, "bad step index '" + s + "' in --select");
    }
    return std::stoull(s);
  };
  while (std::getline(ss, part, ',')) {
    if (auto dots = part.find(".."); dots != std::string::npos) {
      const std::size_t lo = number(part.substr(0, dots));
      const std::size_t hi = number(part.substr(dots + 2));
      if (hi < lo) throw Error(ErrorCode::Argument, "empty range '" + part + "' in --select");
      for (std::size_t k = lo; k <= hi; ++k) out.insert(k);
    } else {
      out.insert(number(part));
    }
  }
  if (out.empty()) throw Error(ErrorCode::Argument, "--select is empty");
  return out;
}

DisplayOptions readOptions(const std::string& path) {
  if (path.empty()) return {};
  Json j;
  try {
    j = Json::parse(readFile(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, "malformed options at byte " + std::to_string(e.byte), path);
  }
  try {
    return displayOptionsFromJson(j, "");
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, std::string(e.what()), e.path());
  }
}

void emit(const Options& o, const Json& result, const std::string& human) {
  if (o.json) {
    std::cout << result.dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

void writeRunOutputs(const Options& o, const Session& s) {
  writeFile(o.out, saveTriple(s.triple()));
  if (!o.protocol.empty()) writeFile(o.protocol, saveProtocol(protocolOf(s)));
}

int runValidate(const Options& o) {
  std::vector<std::string> problems;
  try {
    problems = validateRuleSet(loadRuleSet(readFile(o.ruleset), false));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Reference && e.code() != ErrorCode::Validation) throw;
    problems.push_back(e.what());
  }
  if (!o.input.empty() && problems.empty()) {
    const RuleSet rs = loadRuleSet(readFile(o.ruleset));
    try {
      loadTriple(readFile(o.input), rs.metamodel);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Reference && e.code() != ErrorCode::Validation) throw;
      problems.push_back(o.input + ": " + e.what());
    }
  }
  Json result;
  result["command"] = "validate";
  result["valid"] = problems.empty();
  result["problems"] = problems;
  std::string human;
  for (const auto& p : problems) human += p + "\n";
  if (problems.empty()) human = "ok\n";
  emit(o, result, human);
  return problems.empty() ? kOk : kFailed;
}

int runGen(const Options& o) {
  Session s = Session::create(readRuleSet(o.ruleset), OperationKind::Gen, {}, o.seed);
  const DataPackage p = s.runBackground(o.maxSteps);
  writeRunOutputs(o, s);
  Json result;
  result["command"] = "gen";
  result["protocolLength"] = p.protocolLength;
  result["haltReason"] = p.haltReason ? Json(std::string(toString(*p.haltReason))) : Json(nullptr);
  result["elements"] = s.triple().size();
  emit(o, result,
       "generated " + std::to_string(s.triple().size()) + " elements in " + std::to_string(p.protocolLength) +
           " steps\n");
  return kOk;
}

int runTransform(const Options& o, OperationKind kind) {
  auto rs = readRuleSet(o.ruleset);
  TripleGraph input = loadTriple(readFile(o.input), rs->metamodel);
  Session s = Session::create(rs, kind, std::move(input), o.seed);
  const DataPackage p = s.runBackground(o.maxSteps == 0 ? std::numeric_limits<std::size_t>::max() : o.maxSteps);
  writeRunOutputs(o, s);
  const auto unmarked = s.unmarkedElements();
  Json result;
  result["command"] = std::string(kind == OperationKind::Fwd ? "fwd" : "bwd");
  result["protocolLength"] = p.protocolLength;
  result["complete"] = unmarked.empty();
  result["unmarked"] = unmarked;
  std::string human = "applied " + std::to_string(p.protocolLength) + " rules\n";
  if (!unmarked.empty()) {
    human += "INCOMPLETE: " + std::to_string(unmarked.size()) + " element(s) not translated:";
    for (const auto& id : unmarked) human += " " + id;
    human += "\n";
  }
  emit(o, result, human);
  return unmarked.empty() ? kOk : kFailed;
}

int runReplay(const Options& o) {
  const RuleSet rs = loadRuleSet(readFile(o.ruleset));
  const ProtocolDocument doc = loadProtocol(readFile(o.protocol), rs);
  if (o.at >= doc.applications.size()) {
    throw Error(ErrorCode::Argument, "--at " + std::to_string(o.at) + " is past the protocol (length " +
                                         std::to_string(doc.applications.size()) + ")");
  }
  const ReplayState state = replay(rs, doc.initial, doc.applications, o.at + 1);
  writeFile(o.out, saveTriple(state.triple));
  Json result;
  result["command"] = "replay";
  result["at"] = o.at;
  result["elements"] = state.triple.size();
  emit(o, result, "state after step " + std::to_string(o.at) + ": " + std::to_string(state.triple.size()) +
                      " elements\n");
  return kOk;
}

int runDiagram(const Options& o) {
  const RuleSet rs = loadRuleSet(readFile(o.ruleset));
  const DisplayOptions opts = readOptions(o.options);
  ViewModel view;
  if (!o.rule.empty()) {
    const TGGRule* rule = rs.findRule(o.rule);
    if (rule == nullptr) throw Error(ErrorCode::Argument, "unknown rule '" + o.rule + "'");
    view = buildRuleView(*rule, opts);
  } else if (!o.protocol.empty()) {
    const ProtocolDocument doc = loadProtocol(readFile(o.protocol), rs);
    view = buildProtocolView(rs, doc.initial, doc.applications, parseSelection(o.select), opts);
  } else {
    throw Error(ErrorCode::Argument, "diagram needs --rule or --protocol with --select");
  }
  const std::string text = renderDiagram(view, diagramFormatFromString(o.format));
  if (o.out.empty()) {
    std::cout << text;
    return kOk;
  }
  writeFile(o.out, text);
  Json result;
  result["command"] = "diagram";
  result["nodes"] = view.nodes.size();
  result["out"] = o.out;
  emit(o, result, "wrote " + o.out + "\n");
  return kOk;
}

TransportServer* activeServer = nullptr;

int runServe(const Options& o) {
  SessionConfig config;
  config.ruleset = readRuleSet(o.ruleset);
  config.kind = operationKindFromString(o.mode);
  if (config.kind != OperationKind::Gen) {
    if (o.input.empty()) throw Error(ErrorCode::Argument, "--input is required for " + o.mode);
    config.input = loadTriple(readFile(o.input), config.ruleset->metamodel);
  }
  config.seed = o.seed;
  config.makeSession();  // fail fast on inputs the operation cannot start from
  TransportServer server(config, o.port);
  activeServer = &server;
  std::signal(SIGINT, [](int) {
    if (activeServer != nullptr) activeServer->stop();
  });
  std::cout << "listening on 127.0.0.1:" << server.port() << std::endl;
  server.run();
  activeServer = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple graph grammar engine and step debugger"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Print machine-readable results");

  auto* validate = app.add_subcommand("validate", "Check a rule set (and optionally a triple) for violations");
  validate->add_option("--ruleset", o.ruleset, "Rule set document")->required();
  validate->add_option("--input", o.input, "Triple document to check against the rule set's metamodel");

  auto* gen = app.add_subcommand("gen", "Generate a consistent triple");
  gen->add_option("--ruleset", o.ruleset, "Rule set document")->required();
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--max-steps", o.maxSteps, "Number of rule applications")->required();
  gen->add_option("--out", o.out, "Output triple")->required();
  gen->add_option("--protocol", o.protocol, "Write the protocol here");

  CLI::App* transforms[2];
  const char* names[2] = {"fwd", "bwd"};
  for (int i = 0; i < 2; ++i) {
    auto* t = app.add_subcommand(names[i], i == 0 ? "Forward transformation" : "Backward transformation");
    t->add_option("--ruleset", o.ruleset, "Rule set document")->required();
    t->add_option("--input", o.input, "Input triple")->required();
    t->add_option("--seed", o.seed, "Random seed");
    t->add_option("--max-steps", o.maxSteps, "Stop after this many applications (default: until exhausted)");
    t->add_option("--out", o.out, "Output triple")->required();
    t->add_option("--protocol", o.protocol, "Write the protocol here");
    transforms[i] = t;
  }

  auto* rep = app.add_subcommand("replay", "Reconstruct the triple after a protocol step");
  rep->add_option("--ruleset", o.ruleset, "Rule set document")->required();
  rep->add_option("--protocol", o.protocol, "Protocol document")->required();
  rep->add_option("--at", o.at, "Zero-based step index")->required();
  rep->add_option("--out", o.out, "Output triple")->required();

  auto* diagram = app.add_subcommand("diagram", "Export a rule or protocol diagram");
  diagram->add_option("--ruleset", o.ruleset, "Rule set document")->required();
  auto* ruleOpt = diagram->add_option("--rule", o.rule, "Rule to draw");
  auto* protoOpt = diagram->add_option("--protocol", o.protocol, "Protocol document");
  auto* selectOpt = diagram->add_option("--select", o.select, "Steps, e.g. 0,2 or 1..3");
  protoOpt->needs(selectOpt);
  selectOpt->needs(protoOpt);
  ruleOpt->excludes(protoOpt);
  diagram->add_option("--options", o.options, "Display options JSON");
  diagram->add_option("--format", o.format, "puml or dot")->check(CLI::IsMember({"puml", "dot"}));
  diagram->add_option("--out", o.out, "Output file (default: standard output)");

  auto* serve = app.add_subcommand("serve", "Run the debug server");
  serve->add_option("--ruleset", o.ruleset, "Rule set document")->required();
  serve->add_option("--mode", o.mode, "gen, fwd or bwd")->check(CLI::IsMember({"gen", "fwd", "bwd"}));
  serve->add_option("--input", o.input, "Input triple (fwd/bwd)");
  serve->add_option("--port", o.port, "TCP port");
  serve->add_option("--seed", o.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*validate) return runValidate(o);
    if (*gen) return runGen(o);
    if (*transforms[0]) return runTransform(o, OperationKind::Fwd);
    if (*transforms[1]) return runTransform(o, OperationKind::Bwd);
    if (*rep) return runReplay(o);
    if (*diagram) return runDiagram(o);
    if (*serve) return runServe(o);
  } catch (const Error& e) {
    std::cerr << "error [" << toString(e.code()) << "]";
    if (!e.path().empty()) std::cerr << " at " << e.path();
    std::cerr << ": " << e.what() << "\n";
    return exitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormat;
  }
  return kUsage;
}
