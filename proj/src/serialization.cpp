#include "tggdbg/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tggdbg/conformance.hpp"
#include "tggdbg/errors.hpp"

namespace tgg {

std::string_view toString(DocumentKind k) {
  switch (k) {
    case DocumentKind::Metamodel: return "METAMODEL";
    case DocumentKind::Ruleset: return "RULESET";
    case DocumentKind::Triple: return "TRIPLE";
    case DocumentKind::Protocol: return "PROTOCOL";
    case DocumentKind::Session: return "SESSION";
  }
  return "?";
}

DocumentKind documentKindFromString(std::string_view s) {
  for (auto k : {DocumentKind::Metamodel, DocumentKind::Ruleset, DocumentKind::Triple, DocumentKind::Protocol,
                 DocumentKind::Session}) {
    if (toString(k) == s) return k;
  }
  throw Error(ErrorCode::Kind, "unknown document kind '" + std::string(s) + "'", "/kind");
}

namespace {

[[noreturn]] void schemaError(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Schema, "schema error at " + (path.empty() ? std::string("/") : path) + ": " + what, path);
}

const Json& field(const Json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) schemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schemaError(path + "/" + std::string(key), "missing required field");
  return *it;
}

std::string str(const Json& obj, std::string_view key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_string()) schemaError(path + "/" + std::string(key), "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> optStr(const Json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) schemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) schemaError(path + "/" + std::string(key), "expected a string");
  return it->get<std::string>();
}

bool boolean(const Json& obj, std::string_view key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_boolean()) schemaError(path + "/" + std::string(key), "expected a boolean");
  return v.get<bool>();
}

std::uint64_t unsignedInt(const Json& obj, std::string_view key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    schemaError(path + "/" + std::string(key), "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

const Json& array(const Json& obj, std::string_view key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_array()) schemaError(path + "/" + std::string(key), "expected an array");
  return v;
}

std::vector<std::string> strings(const Json& obj, std::string_view key, const std::string& path) {
  const Json& arr = array(obj, key, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) schemaError(path + "/" + std::string(key) + "/" + std::to_string(i), "expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

// Converts an enum-parsing failure into a located schema error.
template <typename F>
auto enumField(const Json& obj, std::string_view key, const std::string& path, F parse) {
  const std::string value = str(obj, key, path);
  try {
    return parse(value);
  } catch (const Error& e) {
    schemaError(path + "/" + std::string(key), e.what());
  }
}

Json stringArray(const std::vector<std::string>& v) {
  Json arr = Json::array();
  for (const auto& s : v) arr.push_back(s);
  return arr;
}

template <typename Set>
Json sortedArray(const Set& s) {
  std::vector<std::string> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return stringArray(v);
}

Json metamodelSide(const Metamodel& mm) {
  Json j;
  j["name"] = mm.name();
  Json nodes = Json::array();
  for (const auto& t : mm.nodeTypes()) {
    Json n;
    n["name"] = t.name;
    n["abstract"] = t.abstract;
    if (t.supertype) n["supertype"] = *t.supertype;
    nodes.push_back(std::move(n));
  }
  j["nodeTypes"] = std::move(nodes);
  Json edges = Json::array();
  for (const auto& t : mm.edgeTypes()) {
    Json e;
    e["name"] = t.name;
    e["source"] = t.source;
    e["target"] = t.target;
    e["upperBound"] = std::string(toString(t.upperBound));
    edges.push_back(std::move(e));
  }
  j["edgeTypes"] = std::move(edges);
  return j;
}

Metamodel metamodelSideFromJson(const Json& j, const std::string& path) {
  std::vector<NodeType> nodes;
  const Json& nt = array(j, "nodeTypes", path);
  for (std::size_t i = 0; i < nt.size(); ++i) {
    const std::string p = path + "/nodeTypes/" + std::to_string(i);
    NodeType t{str(nt[i], "name", p), false, optStr(nt[i], "supertype", p)};
    if (nt[i].contains("abstract")) t.abstract = boolean(nt[i], "abstract", p);
    nodes.push_back(std::move(t));
  }
  std::vector<EdgeType> edges;
  const Json& et = array(j, "edgeTypes", path);
  for (std::size_t i = 0; i < et.size(); ++i) {
    const std::string p = path + "/edgeTypes/" + std::to_string(i);
    edges.push_back({str(et[i], "name", p), str(et[i], "source", p), str(et[i], "target", p),
                     enumField(et[i], "upperBound", p, upperBoundFromString)});
  }
  return Metamodel(str(j, "name", path), std::move(nodes), std::move(edges));
}

// Element id -> JSON path, for located conformance errors.
using PathIndex = std::map<std::string, std::string, std::less<>>;

TripleGraph parseTriple(const Json& j, const std::string& path, PathIndex* paths) {
  TripleGraph g;
  auto add = [&](const std::string& p, auto&& insert, const std::string& id) {
    try {
      insert();
    } catch (const Error& e) {
      schemaError(p + "/id", e.what());
    }
    if (paths) paths->emplace(id, p);
  };
  const Json& nodes = array(j, "nodes", path);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string p = path + "/nodes/" + std::to_string(i);
    Node n{str(nodes[i], "id", p), str(nodes[i], "type", p), enumField(nodes[i], "domain", p, domainFromString),
           optStr(nodes[i], "label", p).value_or("")};
    if (n.label.empty()) n.label = n.id;
    const std::string id = n.id;
    add(p, [&] { g.addNode(std::move(n)); }, id);
  }
  const Json& edges = array(j, "edges", path);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = path + "/edges/" + std::to_string(i);
    Edge e{str(edges[i], "id", p), str(edges[i], "type", p), enumField(edges[i], "domain", p, domainFromString),
           str(edges[i], "source", p), str(edges[i], "target", p)};
    const std::string id = e.id;
    add(p, [&] { g.addEdge(std::move(e)); }, id);
  }
  const Json& corrs = array(j, "corrs", path);
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const std::string p = path + "/corrs/" + std::to_string(i);
    CorrLink c{str(corrs[i], "id", p), str(corrs[i], "type", p), str(corrs[i], "source", p),
               str(corrs[i], "target", p)};
    if (auto d = optStr(corrs[i], "domain", p); d && *d != toString(Domain::Correspondence)) {
      schemaError(p + "/domain", "correspondence links must have domain CORRESPONDENCE");
    }
    const std::string id = c.id;
    add(p, [&] { g.addCorr(std::move(c)); }, id);
  }
  return g;
}

// Raises the first violation as a located error.
void raiseViolation(const Violation& v, const PathIndex& paths, const std::string& fallback) {
  std::string path = fallback;
  for (const auto& id : v.elementIds) {
    if (auto it = paths.find(id); it != paths.end()) {
      path = it->second;
      break;
    }
  }
  const bool reference = v.kind == ViolationKind::UnknownType || v.kind == ViolationKind::DanglingEdge;
  std::string ids;
  for (const auto& id : v.elementIds) ids += (ids.empty() ? "" : ", ") + id;
  throw Error(reference ? ErrorCode::Reference : ErrorCode::Validation,
              std::string(toString(v.kind)) + " at " + path + " [" + ids + "]: " + v.message, path);
}

TGGRule parseRule(const Json& j, const std::string& path, PathIndex* paths) {
  TGGRule rule;
  rule.name = str(j, "name", path);
  Json triple;
  triple["nodes"] = array(j, "nodes", path);
  triple["edges"] = array(j, "edges", path);
  triple["corrs"] = array(j, "corrs", path);
  rule.pattern = parseTriple(triple, path, paths);
  for (std::string_view group : {"nodes", "edges", "corrs"}) {
    const Json& arr = j.at(std::string(group));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = path + "/" + std::string(group) + "/" + std::to_string(i);
      rule.annotations[str(arr[i], "id", p)] = enumField(arr[i], "annotation", p, annotationFromString);
    }
  }
  return rule;
}

Json mappingJson(const Mapping& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

Mapping mappingFromJson(const Json& j, const std::string& path) {
  if (!j.is_object()) schemaError(path, "expected an object");
  Mapping m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it->is_string()) schemaError(path + "/" + it.key(), "expected a string");
    m.emplace(it.key(), it->get<std::string>());
  }
  return m;
}

Json matchFields(const Match& m) {
  Json j;
  j["id"] = m.id;
  j["rule"] = m.ruleName;
  j["kind"] = std::string(toString(m.kind));
  j["mapping"] = mappingJson(m.mapping);
  return j;
}

Json applicationsJson(const Protocol& p) {
  Json arr = Json::array();
  for (const auto& app : p) arr.push_back(toJson(app));
  return arr;
}

Protocol applicationsFromJson(const Json& arr, const std::string& path) {
  Protocol out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(applicationFromJson(arr[i], path + "/" + std::to_string(i)));
    if (out.back().stepIndex != i) schemaError(path + "/" + std::to_string(i) + "/stepIndex", "must equal position");
    if (i > 0 && out[i].appId <= out[i - 1].appId) {
      schemaError(path + "/" + std::to_string(i) + "/appId", "application ids must increase");
    }
  }
  return out;
}

}  // namespace

Json openDocument(std::string_view text, DocumentKind expected) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what(),
                "byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) schemaError("", "document must be an object");
  const std::string version = str(doc, "formatVersion", "");
  if (version != kFormatVersion) {
    throw Error(ErrorCode::Version, "unsupported formatVersion '" + version + "'", "/formatVersion");
  }
  const std::string kind = str(doc, "kind", "");
  if (kind != toString(expected)) {
    throw Error(ErrorCode::Kind, "expected a " + std::string(toString(expected)) + " document, got " + kind, "/kind");
  }
  return field(doc, "payload", "");
}

std::string writeDocument(DocumentKind kind, const Json& payload) {
  Json doc;
  doc["formatVersion"] = std::string(kFormatVersion);
  doc["kind"] = std::string(toString(kind));
  doc["payload"] = payload;
  return doc.dump(2) + "\n";
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string(), path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string(), path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string(), path.string());
}

Json toJson(const TripleMetamodel& mm) {
  Json j;
  j["name"] = mm.name();
  j["source"] = metamodelSide(mm.source());
  j["target"] = metamodelSide(mm.target());
  Json corrs = Json::array();
  for (const auto& c : mm.corrTypes()) {
    Json cj;
    cj["name"] = c.name;
    cj["source"] = c.source;
    cj["target"] = c.target;
    corrs.push_back(std::move(cj));
  }
  j["corrTypes"] = std::move(corrs);
  return j;
}

TripleMetamodel metamodelFromJson(const Json& j, const std::string& path) {
  std::vector<CorrType> corrs;
  const Json& ct = array(j, "corrTypes", path);
  for (std::size_t i = 0; i < ct.size(); ++i) {
    const std::string p = path + "/corrTypes/" + std::to_string(i);
    corrs.push_back({str(ct[i], "name", p), str(ct[i], "source", p), str(ct[i], "target", p)});
  }
  TripleMetamodel mm(str(j, "name", path), metamodelSideFromJson(field(j, "source", path), path + "/source"),
                     metamodelSideFromJson(field(j, "target", path), path + "/target"), std::move(corrs));
  if (auto problems = mm.problems(); !problems.empty()) {
    throw Error(ErrorCode::Reference, "metamodel at " + (path.empty() ? "/" : path) + ": " + problems.front(), path);
  }
  return mm;
}

std::string saveMetamodel(const TripleMetamodel& mm) { return writeDocument(DocumentKind::Metamodel, toJson(mm)); }

TripleMetamodel loadMetamodel(std::string_view text) {
  return metamodelFromJson(openDocument(text, DocumentKind::Metamodel), "/payload");
}

Json toJson(const TripleGraph& g) {
  Json j;
  Json nodes = Json::array();
  for (const auto& [id, n] : g.nodes()) {
    Json nj;
    nj["id"] = n.id;
    nj["type"] = n.type;
    nj["domain"] = std::string(toString(n.domain));
    nj["label"] = n.label;
    nodes.push_back(std::move(nj));
  }
  Json edges = Json::array();
  for (const auto& [id, e] : g.edges()) {
    Json ej;
    ej["id"] = e.id;
    ej["type"] = e.type;
    ej["domain"] = std::string(toString(e.domain));
    ej["source"] = e.source;
    ej["target"] = e.target;
    edges.push_back(std::move(ej));
  }
  Json corrs = Json::array();
  for (const auto& [id, c] : g.corrs()) {
    Json cj;
    cj["id"] = c.id;
    cj["type"] = c.type;
    cj["domain"] = std::string(toString(Domain::Correspondence));
    cj["source"] = c.source;
    cj["target"] = c.target;
    corrs.push_back(std::move(cj));
  }
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  j["corrs"] = std::move(corrs);
  return j;
}

TripleGraph tripleFromJson(const Json& j, const std::string& path) { return parseTriple(j, path, nullptr); }

std::string saveTriple(const TripleGraph& g) { return writeDocument(DocumentKind::Triple, toJson(g)); }

TripleGraph loadTriple(std::string_view text, const TripleMetamodel& mm) {
  PathIndex paths;
  TripleGraph g = parseTriple(openDocument(text, DocumentKind::Triple), "/payload", &paths);
  if (auto v = checkConformance(g, mm); !v.empty()) raiseViolation(v.front(), paths, "/payload");
  return g;
}

Json toJson(const TGGRule& rule) {
  Json j;
  j["name"] = rule.name;
  const Json triple = toJson(rule.pattern);
  for (std::string_view group : {"nodes", "edges", "corrs"}) {
    Json arr = Json::array();
    for (Json el : triple.at(std::string(group))) {
      el.erase("label");
      auto it = rule.annotations.find(el.at("id").get<std::string>());
      el["annotation"] = std::string(it == rule.annotations.end() ? "GREEN" : toString(it->second));
      arr.push_back(std::move(el));
    }
    j[std::string(group)] = std::move(arr);
  }
  return j;
}

Json toJson(const RuleSet& rs) {
  Json j;
  j["name"] = rs.name;
  j["metamodel"] = toJson(rs.metamodel);
  Json rules = Json::array();
  for (const auto& r : rs.rules) rules.push_back(toJson(r));
  j["rules"] = std::move(rules);
  return j;
}

RuleSet ruleSetFromJson(const Json& j, const std::string& path, bool check) {
  RuleSet rs;
  rs.name = str(j, "name", path);
  rs.metamodel = metamodelFromJson(field(j, "metamodel", path), path + "/metamodel");
  const Json& rules = array(j, "rules", path);
  std::vector<std::pair<TGGRule, PathIndex>> parsed;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    PathIndex paths;
    const std::string p = path + "/rules/" + std::to_string(i);
    TGGRule r = parseRule(rules[i], p, &paths);
    paths.emplace("", p);
    if (std::any_of(parsed.begin(), parsed.end(), [&](const auto& x) { return x.first.name == r.name; })) {
      schemaError(p + "/name", "duplicate rule name '" + r.name + "'");
    }
    if (check) {
      if (auto v = validateRule(r, rs.metamodel); !v.empty()) raiseViolation(v.front(), paths, p);
    }
    parsed.emplace_back(std::move(r), std::move(paths));
  }
  for (auto& [r, paths] : parsed) rs.rules.push_back(std::move(r));
  std::sort(rs.rules.begin(), rs.rules.end(), [](const TGGRule& a, const TGGRule& b) { return a.name < b.name; });
  return rs;
}

std::string saveRuleSet(const RuleSet& rs) { return writeDocument(DocumentKind::Ruleset, toJson(rs)); }

RuleSet loadRuleSet(std::string_view text, bool check) {
  return ruleSetFromJson(openDocument(text, DocumentKind::Ruleset), "/payload", check);
}

Json toJson(const Match& m) { return matchFields(m); }

Json toJson(const RuleApplication& app) {
  Json j;
  j["appId"] = app.appId;
  j["stepIndex"] = app.stepIndex;
  j["rule"] = app.ruleName;
  j["kind"] = std::string(toString(app.kind));
  j["matchId"] = app.match.id;
  j["mapping"] = mappingJson(app.match.mapping);
  j["created"] = stringArray(app.createdElementIds);
  j["marked"] = stringArray(app.markedElementIds);
  return j;
}

RuleApplication applicationFromJson(const Json& j, const std::string& path) {
  RuleApplication app;
  app.appId = unsignedInt(j, "appId", path);
  app.stepIndex = unsignedInt(j, "stepIndex", path);
  app.ruleName = str(j, "rule", path);
  app.kind = enumField(j, "kind", path, operationKindFromString);
  app.match.ruleName = app.ruleName;
  app.match.kind = app.kind;
  app.match.mapping = mappingFromJson(field(j, "mapping", path), path + "/mapping");
  app.match.id = str(j, "matchId", path);
  if (app.match.id != matchIdFor(app.ruleName, app.kind, app.match.mapping)) {
    schemaError(path + "/matchId", "does not match the recorded mapping");
  }
  app.createdElementIds = strings(j, "created", path);
  app.markedElementIds = strings(j, "marked", path);
  return app;
}

ProtocolDocument protocolOf(const Session& s) {
  return {s.ruleset().name, s.state().kind, s.state().initial, s.protocol()};
}

std::string saveProtocol(const ProtocolDocument& doc) {
  Json j;
  j["ruleset"] = doc.ruleset;
  j["kind"] = std::string(toString(doc.kind));
  j["initialTriple"] = toJson(doc.initial);
  j["applications"] = applicationsJson(doc.applications);
  return writeDocument(DocumentKind::Protocol, j);
}

ProtocolDocument loadProtocol(std::string_view text, const RuleSet& rs) {
  const Json payload = openDocument(text, DocumentKind::Protocol);
  const std::string path = "/payload";
  ProtocolDocument doc;
  doc.ruleset = str(payload, "ruleset", path);
  doc.kind = enumField(payload, "kind", path, operationKindFromString);
  PathIndex paths;
  doc.initial = parseTriple(field(payload, "initialTriple", path), path + "/initialTriple", &paths);
  if (auto v = checkConformance(doc.initial, rs.metamodel); !v.empty()) {
    raiseViolation(v.front(), paths, path + "/initialTriple");
  }
  doc.applications = applicationsFromJson(array(payload, "applications", path), path + "/applications");
  for (std::size_t i = 0; i < doc.applications.size(); ++i) {
    const auto& app = doc.applications[i];
    if (rs.findRule(app.ruleName) == nullptr) {
      throw Error(ErrorCode::Reference, "unknown rule '" + app.ruleName + "'",
                  path + "/applications/" + std::to_string(i) + "/rule");
    }
    if (app.kind != doc.kind) schemaError(path + "/applications/" + std::to_string(i) + "/kind", "kind mismatch");
  }
  try {
    replay(rs, doc.initial, doc.applications, doc.applications.size());
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), e.path().empty() ? path : path + e.path());
  }
  return doc;
}

Json toJson(const Breakpoint& bp) {
  Json j;
  j["kind"] = std::string(toString(bp.kind));
  if (bp.kind == BreakpointKind::StepCount) {
    j["n"] = bp.n;
  } else {
    j["rule"] = bp.rule;
  }
  j["enabled"] = bp.enabled;
  return j;
}

Breakpoint breakpointFromJson(const Json& j, const std::string& path) {
  Breakpoint bp;
  bp.kind = enumField(j, "kind", path, breakpointKindFromString);
  if (bp.kind == BreakpointKind::StepCount) {
    bp.n = unsignedInt(j, "n", path);
  } else {
    bp.rule = str(j, "rule", path);
  }
  if (j.contains("enabled")) bp.enabled = boolean(j, "enabled", path);
  return bp;
}

Json toJson(const RuleStatus& st) {
  Json j;
  j["rule"] = st.ruleName;
  j["currentMatchCount"] = st.currentMatchCount;
  j["appliedCount"] = st.appliedCount;
  j["everApplicable"] = st.everApplicable;
  return j;
}

Json toJson(const DataPackage& p) {
  Json j;
  j["kind"] = std::string(toString(p.kind));
  j["mode"] = std::string(toString(p.mode));
  j["protocolLength"] = p.protocolLength;
  j["haltReason"] = p.haltReason ? Json(std::string(toString(*p.haltReason))) : Json(nullptr);
  j["triggeredBreakpoint"] = p.triggeredBreakpoint ? toJson(*p.triggeredBreakpoint) : Json(nullptr);
  j["warnings"] = stringArray(p.warnings);
  j["lastApplication"] = p.lastApplication ? toJson(*p.lastApplication) : Json(nullptr);
  Json statuses = Json::array();
  for (const auto& st : p.statuses) statuses.push_back(toJson(st));
  j["statuses"] = std::move(statuses);
  Json matches = Json::object();
  for (const auto& [rule, list] : p.availableMatches) {
    Json arr = Json::array();
    for (const auto& m : list) arr.push_back(toJson(m));
    matches[rule] = std::move(arr);
  }
  j["availableMatches"] = std::move(matches);
  return j;
}

std::string saveSession(const Session& s) {
  const SessionState& st = s.state();
  Json j;
  j["kind"] = std::string(toString(st.kind));
  j["mode"] = std::string(toString(st.mode));
  j["seed"] = st.seed;
  j["rngDraws"] = st.rngDraws;
  j["nextId"] = st.nextId;
  j["nextAppId"] = st.nextAppId;
  j["pendingMatch"] = st.pendingMatch ? Json(*st.pendingMatch) : Json(nullptr);
  j["ruleset"] = toJson(*st.ruleset);
  j["initialTriple"] = toJson(st.initial);
  j["triple"] = toJson(st.triple);
  Json marking;
  marking["source"] = sortedArray(st.marking.source);
  marking["target"] = sortedArray(st.marking.target);
  j["marking"] = std::move(marking);
  j["applications"] = applicationsJson(st.protocol);
  std::vector<Breakpoint> bps = st.breakpoints;
  std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) {
    return std::tie(a.kind, a.rule, a.n) < std::tie(b.kind, b.rule, b.n);
  });
  Json bpj = Json::array();
  for (const auto& bp : bps) bpj.push_back(toJson(bp));
  j["breakpoints"] = std::move(bpj);
  Json statuses = Json::array();
  for (const auto& rs : st.statuses) statuses.push_back(toJson(rs));
  j["statuses"] = std::move(statuses);
  return writeDocument(DocumentKind::Session, j);
}

Session loadSession(std::string_view text) {
  const Json payload = openDocument(text, DocumentKind::Session);
  const std::string path = "/payload";
  SessionState st;
  st.kind = enumField(payload, "kind", path, operationKindFromString);
  st.mode = enumField(payload, "mode", path, modeFromString);
  st.seed = unsignedInt(payload, "seed", path);
  st.rngDraws = unsignedInt(payload, "rngDraws", path);
  st.nextId = unsignedInt(payload, "nextId", path);
  st.nextAppId = unsignedInt(payload, "nextAppId", path);
  st.pendingMatch = optStr(payload, "pendingMatch", path);
  auto rs = std::make_shared<RuleSet>(ruleSetFromJson(field(payload, "ruleset", path), path + "/ruleset"));
  st.ruleset = rs;
  st.initial = tripleFromJson(field(payload, "initialTriple", path), path + "/initialTriple");
  st.triple = tripleFromJson(field(payload, "triple", path), path + "/triple");
  const Json& marking = field(payload, "marking", path);
  for (auto& id : strings(marking, "source", path + "/marking")) st.marking.source.insert(std::move(id));
  for (auto& id : strings(marking, "target", path + "/marking")) st.marking.target.insert(std::move(id));
  st.protocol = applicationsFromJson(array(payload, "applications", path), path + "/applications");
  const Json& bps = array(payload, "breakpoints", path);
  for (std::size_t i = 0; i < bps.size(); ++i) {
    st.breakpoints.push_back(breakpointFromJson(bps[i], path + "/breakpoints/" + std::to_string(i)));
  }
  const Json& statuses = array(payload, "statuses", path);
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    const std::string p = path + "/statuses/" + std::to_string(i);
    st.statuses.push_back({str(statuses[i], "rule", p), unsignedInt(statuses[i], "currentMatchCount", p),
                           unsignedInt(statuses[i], "appliedCount", p), boolean(statuses[i], "everApplicable", p)});
  }

  // The protocol must reproduce the stored triple exactly.
  ReplayState replayed;
  try {
    replayed = replay(*rs, st.initial, st.protocol, st.protocol.size());
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), path + e.path());
  }
  if (!(replayed.triple == st.triple) || !(replayed.marking == st.marking)) {
    throw Error(ErrorCode::Validation, "session triple does not match its protocol", path + "/triple");
  }
  try {
    return Session(std::move(st));
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), e.path().empty() ? path : e.path());
  }
}

Json toJson(const DisplayOptions& o) {
  Json j;
  j["showSource"] = o.showSource;
  j["showTarget"] = o.showTarget;
  j["showCorrespondence"] = o.showCorrespondence;
  j["contextOnly"] = o.contextOnly;
  j["labelMode"] = std::string(toString(o.labelMode));
  j["neighborhoodK"] = o.neighborhoodK;
  return j;
}

DisplayOptions displayOptionsFromJson(const Json& j, const std::string& path) {
  if (j.is_null()) return {};
  if (!j.is_object()) schemaError(path, "expected an object");
  DisplayOptions o;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "showSource") {
      o.showSource = boolean(j, key, path);
    } else if (key == "showTarget") {
      o.showTarget = boolean(j, key, path);
    } else if (key == "showCorrespondence") {
      o.showCorrespondence = boolean(j, key, path);
    } else if (key == "contextOnly") {
      o.contextOnly = boolean(j, key, path);
    } else if (key == "labelMode") {
      o.labelMode = enumField(j, key, path, labelModeFromString);
    } else if (key == "neighborhoodK") {
      if (!it->is_number_integer()) schemaError(path + "/" + key, "expected an integer");
      o.neighborhoodK = it->get<int>();
    } else {
      schemaError(path + "/" + key, "unknown display option");
    }
  }
  try {
    o.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Argument, e.what(), path + e.path());
  }
  return o;
}

Json toJson(const ViewModel& v) {
  Json j;
  Json nodes = Json::array();
  for (const auto& n : v.nodes) {
    Json nj;
    nj["id"] = n.id;
    nj["elementId"] = n.elementId;
    nj["part"] = std::string(toString(n.part));
    nj["domain"] = std::string(toString(n.domain));
    nj["label"] = n.label;
    nj["emphasis"] = std::string(toString(n.emphasis));
    nodes.push_back(std::move(nj));
  }
  auto links = [](const std::vector<ViewLink>& ls) {
    Json arr = Json::array();
    for (const auto& l : ls) {
      Json lj;
      lj["id"] = l.id;
      lj["elementId"] = l.elementId;
      lj["part"] = std::string(toString(l.part));
      lj["domain"] = std::string(toString(l.domain));
      lj["source"] = l.source;
      lj["target"] = l.target;
      lj["label"] = l.label;
      lj["emphasis"] = std::string(toString(l.emphasis));
      arr.push_back(std::move(lj));
    }
    return arr;
  };
  j["nodes"] = std::move(nodes);
  j["edges"] = links(v.edges);
  j["corrs"] = links(v.corrs);
  Json ml = Json::array();
  for (const auto& m : v.matchLinks) {
    Json mj;
    mj["rule"] = m.ruleNode;
    mj["model"] = m.modelNode;
    ml.push_back(std::move(mj));
  }
  j["matchLinks"] = std::move(ml);
  return j;
}

}  // namespace tgg
