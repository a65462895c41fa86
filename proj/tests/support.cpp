#include "support.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <regex>

#include "tggdbg/conformance.hpp"
#include "tggdbg/serialization.hpp"
#include "tggdbg/server.hpp"
#include "tggdbg/view.hpp"

#ifndef TGGDBG_FIXTURE_DIR
#error "TGGDBG_FIXTURE_DIR must point at the fixtures directory"
#endif
#ifndef TGGDBG_GOLDEN_DIR
#error "TGGDBG_GOLDEN_DIR must point at the golden files directory"
#endif

namespace tgg::testing {

std::filesystem::path fixturePath(const std::string& name) {
  return std::filesystem::path(TGGDBG_FIXTURE_DIR) / name;
}

std::filesystem::path goldenPath(const std::string& name) {
  return std::filesystem::path(TGGDBG_GOLDEN_DIR) / name;
}

std::shared_ptr<const RuleSet> companyToIt() {
  static const auto rs =
      std::make_shared<const RuleSet>(loadRuleSet(readFile(fixturePath("companytoit.ruleset.json"))));
  return rs;
}

TripleGraph companySource(int admins, int employees) {
  TripleGraph g;
  g.addNode({"c", "Company", Domain::Source, "ACME"});
  g.addNode({"boss", "CEO", Domain::Source, "Boss"});
  g.addEdge({"c_boss", "ceo", Domain::Source, "c", "boss"});
  auto person = [&](const std::string& id, const std::string& type, const std::string& via) {
    g.addNode({id, type, Domain::Source, id});
    g.addEdge({"c_" + id, via, Domain::Source, "c", id});
    g.addEdge({id + "_boss", "reportsTo", Domain::Source, id, "boss"});
  };
  for (int i = 1; i <= admins; ++i) person("a" + std::to_string(i), "Admin", "admins");
  for (int i = 1; i <= employees; ++i) person("emp" + std::to_string(i), "Employee", "employees");
  return g;
}

std::map<std::string, int> typeCounts(const TripleGraph& g, Domain d) {
  std::map<std::string, int> out;
  if (d == Domain::Correspondence) {
    for (const auto& [id, c] : g.corrs()) ++out[c.type];
    return out;
  }
  for (const auto& [id, n] : g.nodes()) {
    if (n.domain == d) ++out[n.type];
  }
  return out;
}

namespace {

bool conformsTo(const TripleMetamodel& mm, Domain d, const std::string& actual, const std::string& wanted) {
  // Walk the supertype chain by hand.
  const Metamodel& side = mm.side(d);
  std::optional<std::string> t = actual;
  for (std::size_t guard = 0; t && guard <= side.nodeTypes().size(); ++guard) {
    if (*t == wanted) return true;
    const NodeType* nt = side.findNodeType(*t);
    t = nt ? nt->supertype : std::nullopt;
  }
  return false;
}

// Adds the rule's creations under throwaway ids and reports whether any
// upper bound breaks as a result.
bool feasibleByConstruction(const OperationalRule& op, const TripleGraph& host, const Mapping& mapping,
                            const TripleMetamodel& mm) {
  TripleGraph g = host;
  std::map<std::string, std::string> image(mapping.begin(), mapping.end());
  int fresh = 0;
  for (const auto& id : op.toCreate) image[id] = "__new" + std::to_string(fresh++);
  const TripleGraph& p = op.rule.pattern;
  for (const auto& id : op.toCreate) {
    if (const Node* n = p.findNode(id)) g.addNode({image[id], n->type, n->domain, id});
  }
  for (const auto& id : op.toCreate) {
    if (const Edge* e = p.findEdge(id)) g.addEdge({image[id], e->type, e->domain, image[e->source], image[e->target]});
    if (const CorrLink* c = p.findCorr(id)) g.addCorr({image[id], c->type, image[c->source], image[c->target]});
  }
  for (const auto& v : checkConformance(g, mm)) {
    if (v.kind == ViolationKind::UpperBound) return false;
  }
  return true;
}

bool markingHolds(const OperationalRule& op, const Mapping& mapping, const MarkingState& marking) {
  if (op.kind == OperationKind::Gen) return true;
  const Domain translated = op.kind == OperationKind::Fwd ? Domain::Source : Domain::Target;
  const auto& marked = translated == Domain::Source ? marking.source : marking.target;
  for (const auto& [ruleId, hostId] : mapping) {
    if (op.rule.pattern.domainOf(ruleId) != translated) continue;
    const bool green = op.rule.annotations.at(ruleId) == Annotation::Green;
    if (green == marked.contains(hostId)) return false;
  }
  return true;
}

}  // namespace

std::vector<Mapping> bruteForceMatches(const OperationalRule& op, const TripleGraph& host,
                                       const MarkingState& marking, const TripleMetamodel& mm, bool injective) {
  const TripleGraph& p = op.rule.pattern;
  std::vector<std::string> ruleNodes, ruleLinks;
  for (const auto& id : op.context) (p.findNode(id) ? ruleNodes : ruleLinks).push_back(id);

  std::vector<std::pair<std::vector<std::string>, Mapping>> found;
  Mapping current;

  // Links: every host link of the same kind and type between the images.
  std::function<void(std::size_t)> assignLinks = [&](std::size_t i) {
    if (i == ruleLinks.size()) {
      if (!markingHolds(op, current, marking)) return;
      if (!feasibleByConstruction(op, host, current, mm)) return;
      std::vector<std::string> key;
      for (const auto& id : op.context) key.push_back(current.at(id));
      found.emplace_back(std::move(key), current);
      return;
    }
    const std::string& r = ruleLinks[i];
    std::vector<std::string> candidates;
    if (const Edge* e = p.findEdge(r)) {
      for (const auto& [hid, he] : host.edges()) {
        if (he.type == e->type && he.domain == e->domain && he.source == current.at(e->source) &&
            he.target == current.at(e->target)) {
          candidates.push_back(hid);
        }
      }
    } else {
      const CorrLink* c = p.findCorr(r);
      for (const auto& [hid, hc] : host.corrs()) {
        if (hc.type == c->type && hc.source == current.at(c->source) && hc.target == current.at(c->target)) {
          candidates.push_back(hid);
        }
      }
    }
    for (const auto& hid : candidates) {
      if (injective && std::any_of(ruleLinks.begin(), ruleLinks.begin() + i,
                                   [&](const std::string& prev) { return current.at(prev) == hid; })) {
        continue;
      }
      current[r] = hid;
      assignLinks(i + 1);
      current.erase(r);
    }
  };

  std::function<void(std::size_t)> assignNodes = [&](std::size_t i) {
    if (i == ruleNodes.size()) {
      assignLinks(0);
      return;
    }
    const Node& rn = *p.findNode(ruleNodes[i]);
    for (const auto& [hid, hn] : host.nodes()) {
      if (hn.domain != rn.domain || !conformsTo(mm, rn.domain, hn.type, rn.type)) continue;
      if (injective && std::any_of(ruleNodes.begin(), ruleNodes.begin() + i,
                                   [&](const std::string& prev) { return current.at(prev) == hid; })) {
        continue;
      }
      current[rn.id] = hid;
      assignNodes(i + 1);
      current.erase(rn.id);
    }
  };
  assignNodes(0);

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Mapping> out;
  for (auto& [key, m] : found) out.push_back(std::move(m));
  return out;
}

std::set<std::string> neighborhoodOracle(const TripleGraph& g, const std::set<std::string>& seeds, int k) {
  std::vector<std::string> ids;
  for (const auto& [id, n] : g.nodes()) ids.push_back(id);
  const std::size_t n = ids.size();
  auto index = [&](const std::string& id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
  auto connect = [&](const std::string& a, const std::string& b) {
    if (!g.findNode(a) || !g.findNode(b)) return;
    const std::size_t i = index(a), j = index(b);
    dist[i][j] = std::min(dist[i][j], 1);
    dist[j][i] = std::min(dist[j][i], 1);
  };
  for (const auto& [id, e] : g.edges()) connect(e.source, e.target);
  for (const auto& [id, c] : g.corrs()) connect(c.source, c.target);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dist[i][j] = std::min(dist[i][j], dist[i][m] + dist[m][j]);
    }
  }
  std::set<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& s : seeds) {
      if (dist[index(s)][i] <= k) out.insert(ids[i]);
    }
  }
  std::set<std::string> nodes = out;
  for (const auto& [id, e] : g.edges()) {
    if (nodes.contains(e.source) && nodes.contains(e.target)) out.insert(id);
  }
  for (const auto& [id, c] : g.corrs()) {
    if (nodes.contains(c.source) && nodes.contains(c.target)) out.insert(id);
  }
  return out;
}

RandomHost randomHost(std::mt19937_64& rng, const RuleSet& rs, std::size_t maxNodes) {
  auto shared = std::make_shared<const RuleSet>(rs);
  TripleGraph g;
  for (;;) {
    Session s = Session::create(shared, OperationKind::Gen, {}, rng());
    s.runBackground(1 + rng() % std::max<std::size_t>(4, maxNodes / 3));
    if (s.triple().nodes().size() <= maxNodes) {
      g = s.triple();
      break;
    }
  }

  auto dropNode = [&](const std::string& id) {
    std::vector<std::string> incident;
    for (const auto& [eid, e] : g.edges()) {
      if (e.source == id || e.target == id) incident.push_back(eid);
    }
    for (const auto& [cid, c] : g.corrs()) {
      if (c.source == id || c.target == id) incident.push_back(cid);
    }
    for (const auto& x : incident) g.erase(x);
    g.erase(id);
  };
  auto dropDomain = [&](Domain d) {
    std::vector<std::string> doomed;
    for (const auto& [id, n] : g.nodes()) {
      if (n.domain == d) doomed.push_back(id);
    }
    for (const auto& id : doomed) dropNode(id);
    std::vector<std::string> corrs;
    for (const auto& [id, c] : g.corrs()) corrs.push_back(id);
    for (const auto& id : corrs) g.erase(id);
  };

  switch (rng() % 4) {
    case 0: dropDomain(Domain::Target); break;
    case 1: dropDomain(Domain::Source); break;
    default: break;
  }
  std::vector<std::string> ids;
  for (const auto& [id, n] : g.nodes()) ids.push_back(id);
  for (const auto& [id, e] : g.edges()) ids.push_back(id);
  for (const auto& [id, c] : g.corrs()) ids.push_back(id);
  for (const auto& id : ids) {
    if (rng() % 8 == 0 && g.contains(id)) {
      if (g.findNode(id)) {
        dropNode(id);
      } else {
        g.erase(id);
      }
    }
  }

  MarkingState marking;
  for (const auto& [id, n] : g.nodes()) {
    if (n.domain != Domain::Correspondence && rng() % 2 == 0) {
      (n.domain == Domain::Source ? marking.source : marking.target).insert(id);
    }
  }
  for (const auto& [id, e] : g.edges()) {
    if (rng() % 2 == 0) (e.domain == Domain::Source ? marking.source : marking.target).insert(id);
  }
  return {std::move(g), std::move(marking)};
}

DisplayOptions randomOptions(std::mt19937_64& rng) {
  DisplayOptions o;
  o.showSource = rng() % 2;
  o.showTarget = rng() % 2;
  o.showCorrespondence = rng() % 2;
  o.contextOnly = rng() % 2;
  o.labelMode = static_cast<LabelMode>(rng() % 3);
  o.neighborhoodK = static_cast<int>(rng() % 4);
  return o;
}

std::vector<std::string> scriptedForwardTranscript() {
  DebugServer server(Session::create(companyToIt(), OperationKind::Fwd, companySource(2, 1), 7));
  std::vector<std::string> lines;
  int nextId = 1;
  auto send = [&](const std::string& type, Json params) {
    Json req;
    req["id"] = nextId++;
    req["type"] = type;
    req["params"] = std::move(params);
    lines.push_back("> " + req.dump());
    const auto out = server.handleLine(req.dump());
    for (const auto& l : out) lines.push_back("< " + l);
    return Json::parse(out.front());
  };
  send("hello", Json::object());
  const Json overview = send("overview", Json::object());
  const Json axiom = overview["body"]["availableMatches"]["CompanyToITRule"].at(0)["id"];
  send("apply", {{"matchId", axiom}});
  send("apply", {{"matchId", axiom}});
  send("breakpoint.set", {{"kind", "RULE_FIRST_APPLICABLE"}, {"rule", "EmployeeToPCRule"}});
  send("resume", {{"maxSteps", 100}});
  send("protocol", Json::object());
  return lines;
}

std::string normalizeTranscript(const std::string& text) {
  static const std::regex hash("#[0-9a-f]{16}");
  static const std::regex appId("\"appId\":[0-9]+");
  return std::regex_replace(std::regex_replace(text, hash, "#<hash>"), appId, "\"appId\":\"<id>\"");
}

}  // namespace tgg::testing
