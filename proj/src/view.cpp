#include "tggdbg/view.hpp"

#include <algorithm>
#include <functional>

#include "tggdbg/errors.hpp"
#include "tggdbg/neighborhood.hpp"

namespace tgg {

std::string_view toString(LabelMode m) {
  switch (m) {
    case LabelMode::Full: return "FULL";
    case LabelMode::Abbrev: return "ABBREV";
    case LabelMode::None: return "NONE";
  }
  return "?";
}

LabelMode labelModeFromString(std::string_view s) {
  if (s == "FULL") return LabelMode::Full;
  if (s == "ABBREV") return LabelMode::Abbrev;
  if (s == "NONE") return LabelMode::None;
  throw Error(ErrorCode::Argument, "unknown label mode '" + std::string(s) + "'");
}

std::string_view toString(Emphasis e) {
  switch (e) {
    case Emphasis::Created: return "CREATED";
    case Emphasis::Context: return "CONTEXT";
    case Emphasis::Plain: return "PLAIN";
  }
  return "?";
}

std::string_view toString(ViewPart p) { return p == ViewPart::Rule ? "RULE" : "MODEL"; }

bool DisplayOptions::shows(Domain d) const {
  switch (d) {
    case Domain::Source: return showSource;
    case Domain::Target: return showTarget;
    case Domain::Correspondence: return showCorrespondence;
  }
  return false;
}

void DisplayOptions::validate() const {
  if (neighborhoodK < 0 || neighborhoodK > kMaxNeighborhood) {
    throw Error(ErrorCode::Argument, "neighborhoodK must be in [0, 3], got " + std::to_string(neighborhoodK),
                "/neighborhoodK");
  }
}

std::string abbreviateLabel(std::string_view label, LabelMode mode) {
  switch (mode) {
    case LabelMode::Full: return std::string(label);
    case LabelMode::None: return {};
    case LabelMode::Abbrev:
      if (label.size() <= 6) return std::string(label);
      return std::string(label.substr(0, 3)) + "..." + std::string(label.substr(label.size() - 3));
  }
  return std::string(label);
}

const ViewNode* ViewModel::findNode(std::string_view id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const ViewNode& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

std::string viewId(ViewPart part, std::string_view elementId) {
  return (part == ViewPart::Rule ? "R_" : "M_") + std::string(elementId);
}

namespace {

std::string nodeLabel(const std::string& name, const std::string& type, LabelMode mode) {
  if (mode == LabelMode::None) return {};
  return abbreviateLabel(name, mode) + ": " + abbreviateLabel(type, mode);
}

// Adds the induced view of `g` restricted to elements accepted by `keep`.
// Links are only added when both endpoints made it into the view.
void appendGraph(ViewModel& view, const TripleGraph& g, ViewPart part, const DisplayOptions& opts,
                 const std::function<bool(const std::string&)>& keep,
                 const std::function<Emphasis(const std::string&)>& emphasis) {
  std::set<std::string> present;
  for (const auto& [id, n] : g.nodes()) {
    if (!opts.shows(n.domain) || !keep(id)) continue;
    present.insert(id);
    view.nodes.push_back({viewId(part, id), id, part, n.domain,
                          nodeLabel(n.label.empty() ? n.id : n.label, n.type, opts.labelMode), emphasis(id)});
  }
  for (const auto& [id, e] : g.edges()) {
    if (!opts.shows(e.domain) || !keep(id) || !present.contains(e.source) || !present.contains(e.target)) continue;
    view.edges.push_back({viewId(part, id), id, part, e.domain, viewId(part, e.source), viewId(part, e.target),
                          abbreviateLabel(e.type, opts.labelMode), emphasis(id)});
  }
  for (const auto& [id, c] : g.corrs()) {
    if (!opts.showCorrespondence || !keep(id) || !present.contains(c.source) || !present.contains(c.target)) {
      continue;
    }
    view.corrs.push_back({viewId(part, id), id, part, Domain::Correspondence, viewId(part, c.source),
                          viewId(part, c.target), abbreviateLabel(c.type, opts.labelMode), emphasis(id)});
  }
}

void sortView(ViewModel& view) {
  auto byId = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(view.nodes.begin(), view.nodes.end(), byId);
  std::sort(view.edges.begin(), view.edges.end(), byId);
  std::sort(view.corrs.begin(), view.corrs.end(), byId);
  std::sort(view.matchLinks.begin(), view.matchLinks.end(), [](const MatchLink& a, const MatchLink& b) {
    return std::tie(a.ruleNode, a.modelNode) < std::tie(b.ruleNode, b.modelNode);
  });
}

void appendRule(ViewModel& view, const TGGRule& rule, const DisplayOptions& opts) {
  auto green = [&](const std::string& id) {
    auto it = rule.annotations.find(id);
    return it == rule.annotations.end() || it->second == Annotation::Green;
  };
  appendGraph(
      view, rule.pattern, ViewPart::Rule, opts, [&](const std::string& id) { return !opts.contextOnly || !green(id); },
      [&](const std::string& id) { return green(id) ? Emphasis::Created : Emphasis::Context; });
}

}  // namespace

ViewModel buildRuleView(const TGGRule& rule, const DisplayOptions& opts) {
  opts.validate();
  ViewModel view;
  appendRule(view, rule, opts);
  sortView(view);
  return view;
}

ViewModel buildMatchView(const Match& match, const TGGRule& rule, const TripleGraph& host,
                         const DisplayOptions& opts) {
  opts.validate();
  auto stale = [&](const std::string& why) {
    return Error(ErrorCode::StaleMatch, "match " + match.id + " is stale: " + why, match.id);
  };
  if (match.ruleName != rule.name) throw stale("it belongs to rule " + match.ruleName);

  std::set<std::string> seeds;
  for (const auto& [ruleId, hostId] : match.mapping) {
    if (!rule.pattern.contains(ruleId)) throw stale("rule has no element '" + ruleId + "'");
    if (rule.pattern.domainOf(ruleId) != host.domainOf(hostId)) throw stale("'" + hostId + "' is gone");
    if (rule.pattern.findNode(ruleId) != nullptr) {
      if (host.findNode(hostId) == nullptr) throw stale("'" + hostId + "' is not a node");
      seeds.insert(hostId);
    }
  }
  auto image = [&](const std::string& ruleId) -> const std::string* {
    auto it = match.mapping.find(ruleId);
    return it == match.mapping.end() ? nullptr : &it->second;
  };
  for (const auto& [ruleId, hostId] : match.mapping) {
    std::string s, t, hs, ht;
    if (const Edge* e = rule.pattern.findEdge(ruleId)) {
      const Edge* he = host.findEdge(hostId);
      if (he == nullptr) throw stale("'" + hostId + "' is not an edge");
      s = e->source, t = e->target, hs = he->source, ht = he->target;
    } else if (const CorrLink* c = rule.pattern.findCorr(ruleId)) {
      const CorrLink* hc = host.findCorr(hostId);
      if (hc == nullptr) throw stale("'" + hostId + "' is not a corr link");
      s = c->source, t = c->target, hs = hc->source, ht = hc->target;
    } else {
      continue;
    }
    const std::string* is = image(s);
    const std::string* it = image(t);
    if ((is != nullptr && *is != hs) || (it != nullptr && *it != ht)) {
      throw stale("'" + hostId + "' no longer connects the matched nodes");
    }
  }

  ViewModel view;
  appendRule(view, rule, opts);
  const auto inside = kNeighborhood(host, seeds, opts.neighborhoodK);
  std::set<std::string> matched;
  for (const auto& [ruleId, hostId] : match.mapping) matched.insert(hostId);
  appendGraph(
      view, host, ViewPart::Model, opts, [&](const std::string& id) { return inside.contains(id); },
      [&](const std::string& id) { return matched.contains(id) ? Emphasis::Context : Emphasis::Plain; });

  for (const auto& [ruleId, hostId] : match.mapping) {
    if (rule.pattern.findNode(ruleId) == nullptr) continue;
    auto r = viewId(ViewPart::Rule, ruleId);
    auto m = viewId(ViewPart::Model, hostId);
    if (view.findNode(r) != nullptr && view.findNode(m) != nullptr) view.matchLinks.push_back({r, m});
  }
  sortView(view);
  return view;
}

ViewModel buildProtocolView(const RuleSet& ruleset, const TripleGraph& initial, const Protocol& protocol,
                            const std::set<std::size_t>& selection, const DisplayOptions& opts) {
  opts.validate();
  if (selection.empty()) throw Error(ErrorCode::Argument, "protocol selection is empty");
  const std::size_t last = *selection.rbegin();
  if (last >= protocol.size()) {
    throw Error(ErrorCode::Argument, "protocol step " + std::to_string(last) + " does not exist (length " +
                                         std::to_string(protocol.size()) + ")");
  }
  const ReplayState state = replay(ruleset, initial, protocol, last + 1);

  std::set<std::string> created;
  std::set<std::string> seeds;
  for (std::size_t step : selection) {
    const auto& app = protocol[step];
    for (const auto& id : app.createdElementIds) {
      created.insert(id);
      if (state.triple.findNode(id) != nullptr) seeds.insert(id);
    }
    for (const auto& [ruleId, hostId] : app.match.mapping) {
      if (state.triple.findNode(hostId) != nullptr) seeds.insert(hostId);
    }
  }
  const auto inside = kNeighborhood(state.triple, seeds, opts.neighborhoodK);
  ViewModel view;
  appendGraph(
      view, state.triple, ViewPart::Model, opts, [&](const std::string& id) { return inside.contains(id); },
      [&](const std::string& id) { return created.contains(id) ? Emphasis::Created : Emphasis::Plain; });
  sortView(view);
  return view;
}

ViewModel buildModelView(const TripleGraph& triple, const DisplayOptions& opts) {
  opts.validate();
  ViewModel view;
  appendGraph(
      view, triple, ViewPart::Model, opts, [](const std::string&) { return true; },
      [](const std::string&) { return Emphasis::Plain; });
  sortView(view);
  return view;
}

}  // namespace tgg
