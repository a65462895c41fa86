#include "tggdbg/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "tggdbg/conformance.hpp"
#include "tggdbg/errors.hpp"

namespace tgg {

std::string_view toString(Mode m) { return m == Mode::Background ? "BACKGROUND" : "DEBUG"; }

Mode modeFromString(std::string_view s) {
  if (s == "BACKGROUND") return Mode::Background;
  if (s == "DEBUG") return Mode::Debug;
  throw Error(ErrorCode::Argument, "unknown mode '" + std::string(s) + "'");
}

std::string_view toString(BreakpointKind k) {
  switch (k) {
    case BreakpointKind::RuleFirstApplicable: return "RULE_FIRST_APPLICABLE";
    case BreakpointKind::RuleAboutToApply: return "RULE_ABOUT_TO_APPLY";
    case BreakpointKind::StepCount: return "STEP_COUNT";
  }
  return "?";
}

BreakpointKind breakpointKindFromString(std::string_view s) {
  if (s == "RULE_FIRST_APPLICABLE") return BreakpointKind::RuleFirstApplicable;
  if (s == "RULE_ABOUT_TO_APPLY") return BreakpointKind::RuleAboutToApply;
  if (s == "STEP_COUNT") return BreakpointKind::StepCount;
  throw Error(ErrorCode::Argument, "unknown breakpoint kind '" + std::string(s) + "'");
}

std::string_view toString(HaltReason h) {
  switch (h) {
    case HaltReason::Exhausted: return "EXHAUSTED";
    case HaltReason::Breakpoint: return "BREAKPOINT";
    case HaltReason::MaxSteps: return "MAX_STEPS";
  }
  return "?";
}

HaltReason haltReasonFromString(std::string_view s) {
  if (s == "EXHAUSTED") return HaltReason::Exhausted;
  if (s == "BREAKPOINT") return HaltReason::Breakpoint;
  if (s == "MAX_STEPS") return HaltReason::MaxSteps;
  throw Error(ErrorCode::Argument, "unknown halt reason '" + std::string(s) + "'");
}

std::vector<std::string> instantiate(const OperationalRule& op, const Mapping& mapping,
                                     const std::vector<std::string>& freshIds, TripleGraph& triple,
                                     MarkingState& marking) {
  if (freshIds.size() != op.toCreate.size()) {
    throw Error(ErrorCode::Argument, "rule " + op.name + " creates " + std::to_string(op.toCreate.size()) +
                                         " elements, got " + std::to_string(freshIds.size()) + " ids");
  }
  std::map<std::string, std::string, std::less<>> created;
  for (std::size_t i = 0; i < freshIds.size(); ++i) created.emplace(op.toCreate[i], freshIds[i]);

  auto image = [&](const std::string& ruleId) -> const std::string& {
    if (auto it = created.find(ruleId); it != created.end()) return it->second;
    if (auto it = mapping.find(ruleId); it != mapping.end()) return it->second;
    throw Error(ErrorCode::Reference, "rule " + op.name + ": no image for '" + ruleId + "'", ruleId);
  };

  const TripleGraph& pattern = op.rule.pattern;
  // Nodes first so that edges and corrs find their endpoints.
  for (std::size_t i = 0; i < op.toCreate.size(); ++i) {
    if (const Node* n = pattern.findNode(op.toCreate[i])) {
      triple.addNode({freshIds[i], n->type, n->domain, n->label.empty() ? n->id : n->label});
    }
  }
  for (std::size_t i = 0; i < op.toCreate.size(); ++i) {
    if (const Edge* e = pattern.findEdge(op.toCreate[i])) {
      triple.addEdge({freshIds[i], e->type, e->domain, image(e->source), image(e->target)});
    } else if (const CorrLink* c = pattern.findCorr(op.toCreate[i])) {
      triple.addCorr({freshIds[i], c->type, image(c->source), image(c->target)});
    }
  }

  std::vector<std::string> marked;
  for (const auto& ruleId : op.toMark) {
    const std::string& hostId = image(ruleId);
    const auto domain = pattern.domainOf(ruleId);
    auto& set = domain == Domain::Source ? marking.source : marking.target;
    if (!set.insert(hostId).second) {
      throw std::logic_error("element '" + hostId + "' marked twice by rule " + op.name);
    }
    marked.push_back(hostId);
  }
  return marked;
}

ReplayState replay(const RuleSet& ruleset, const TripleGraph& initial, const Protocol& protocol,
                   std::size_t count) {
  if (count > protocol.size()) {
    throw Error(ErrorCode::Argument, "cannot replay " + std::to_string(count) + " steps of a protocol of length " +
                                         std::to_string(protocol.size()));
  }
  ReplayState st{initial, {}};
  for (std::size_t i = 0; i < count; ++i) {
    const RuleApplication& app = protocol[i];
    const std::string where = "/applications/" + std::to_string(i);
    const TGGRule* rule = ruleset.findRule(app.ruleName);
    if (rule == nullptr) {
      throw Error(ErrorCode::Reference, "protocol step " + std::to_string(i) + " names unknown rule " + app.ruleName,
                  where + "/rule");
    }
    const OperationalRule op = operationalize(*rule, app.kind);
    if (app.match.mapping.size() != op.context.size()) {
      throw Error(ErrorCode::Reference, "protocol step " + std::to_string(i) + " does not map the rule context",
                  where + "/mapping");
    }
    for (const auto& id : op.context) {
      auto it = app.match.mapping.find(id);
      if (it == app.match.mapping.end() || !st.triple.contains(it->second)) {
        throw Error(ErrorCode::Reference,
                    "protocol step " + std::to_string(i) + " maps '" + id + "' to a missing element",
                    where + "/mapping/" + id);
      }
    }
    for (const auto& id : app.createdElementIds) {
      if (st.triple.contains(id)) {
        throw Error(ErrorCode::Reference, "protocol step " + std::to_string(i) + " recreates '" + id + "'",
                    where + "/created");
      }
    }
    auto marked = instantiate(op, app.match.mapping, app.createdElementIds, st.triple, st.marking);
    if (marked != app.markedElementIds) {
      throw Error(ErrorCode::Reference, "protocol step " + std::to_string(i) + " records different marks",
                  where + "/marked");
    }
  }
  return st;
}

Session Session::create(std::shared_ptr<const RuleSet> ruleset, OperationKind kind, TripleGraph input,
                        std::uint64_t seed) {
  if (!ruleset) throw Error(ErrorCode::Argument, "session needs a rule set");
  if (auto problems = validateRuleSet(*ruleset); !problems.empty()) {
    throw Error(ErrorCode::Validation, "invalid rule set: " + problems.front());
  }
  if (auto v = checkConformance(input, ruleset->metamodel); !v.empty()) {
    throw Error(ErrorCode::Validation, "input triple is not conformant: " + v.front().message,
                v.front().elementIds.empty() ? std::string{} : v.front().elementIds.front());
  }
  switch (kind) {
    case OperationKind::Gen:
      if (!input.empty()) throw Error(ErrorCode::Argument, "model generation starts from the empty triple");
      break;
    case OperationKind::Fwd:
      if (input.hasDomainContent(Domain::Target) || input.hasDomainContent(Domain::Correspondence)) {
        throw Error(ErrorCode::Argument, "forward transformation input must have empty target and correspondence");
      }
      break;
    case OperationKind::Bwd:
      if (input.hasDomainContent(Domain::Source) || input.hasDomainContent(Domain::Correspondence)) {
        throw Error(ErrorCode::Argument, "backward transformation input must have empty source and correspondence");
      }
      break;
  }

  Session s;
  s.state_.ruleset = std::move(ruleset);
  s.state_.kind = kind;
  s.state_.initial = input;
  s.state_.triple = std::move(input);
  s.state_.seed = seed;
  for (const auto& r : s.state_.ruleset->rules) s.state_.statuses.push_back({r.name, 0, 0, false});
  s.initialize();
  return s;
}

Session::Session(SessionState state) : state_(std::move(state)) {
  if (!state_.ruleset) throw Error(ErrorCode::Argument, "session needs a rule set");
  const auto names = state_.ruleset->ruleNames();
  if (state_.statuses.size() != names.size()) {
    throw Error(ErrorCode::Validation, "rule statuses do not cover the rule set");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (state_.statuses[i].ruleName != names[i]) {
      throw Error(ErrorCode::Validation, "status for rule " + names[i] + " is missing");
    }
  }
  if (auto v = checkConformance(state_.triple, state_.ruleset->metamodel); !v.empty()) {
    throw Error(ErrorCode::Validation, "session triple is not conformant: " + v.front().message);
  }
  for (const auto& id : state_.marking.source) {
    if (state_.triple.domainOf(id) != Domain::Source) {
      throw Error(ErrorCode::Validation, "marked source element '" + id + "' is not in the source graph", id);
    }
  }
  for (const auto& id : state_.marking.target) {
    if (state_.triple.domainOf(id) != Domain::Target) {
      throw Error(ErrorCode::Validation, "marked target element '" + id + "' is not in the target graph", id);
    }
  }
  initialize();
}

void Session::initialize() {
  operational_.clear();
  for (const auto& r : state_.ruleset->rules) operational_.emplace(r.name, operationalize(r, state_.kind));
  rng_.seed(state_.seed);
  rng_.discard(state_.rngDraws);
  recomputeMatches();
}

void Session::recomputeMatches() {
  matches_.clear();
  for (auto& st : state_.statuses) {
    auto found = findMatches(operational_.at(st.ruleName), state_.triple, state_.marking, state_.ruleset->metamodel);
    st.currentMatchCount = found.size();
    st.everApplicable = st.everApplicable || !found.empty();
    matches_.emplace(st.ruleName, std::move(found));
  }
}

const OperationalRule& Session::operational(std::string_view ruleName) const {
  auto it = operational_.find(ruleName);
  if (it == operational_.end()) throw Error(ErrorCode::Argument, "unknown rule '" + std::string(ruleName) + "'");
  return it->second;
}

const std::vector<Match>& Session::matchesFor(std::string_view ruleName) const {
  auto it = matches_.find(ruleName);
  if (it == matches_.end()) throw Error(ErrorCode::Argument, "unknown rule '" + std::string(ruleName) + "'");
  return it->second;
}

const Match* Session::findAvailable(std::string_view matchId) const {
  for (const auto& [rule, list] : matches_) {
    for (const auto& m : list) {
      if (m.id == matchId) return &m;
    }
  }
  return nullptr;
}

std::size_t Session::totalMatchCount() const {
  std::size_t n = 0;
  for (const auto& [rule, list] : matches_) n += list.size();
  return n;
}

std::vector<std::string> Session::unmarkedElements() const {
  if (state_.kind == OperationKind::Gen) return {};
  const Domain d = state_.kind == OperationKind::Fwd ? Domain::Source : Domain::Target;
  const auto& marks = d == Domain::Source ? state_.marking.source : state_.marking.target;
  std::vector<std::string> out;
  for (const auto& [id, n] : state_.triple.nodes()) {
    if (n.domain == d && !marks.contains(id)) out.push_back(id);
  }
  for (const auto& [id, e] : state_.triple.edges()) {
    if (e.domain == d && !marks.contains(id)) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Session::drawIndex(std::uint64_t bound) {
  // Rejection sampling keeps the choice uniform and independent of the
  // standard library's distribution implementation.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = rng_();
    ++state_.rngDraws;
    if (r >= threshold) return r % bound;
  }
}

RuleApplication Session::execute(const Match& chosen) {
  const Match m = chosen;  // `chosen` may live in matches_, which is rebuilt below
  const OperationalRule& op = operational_.at(m.ruleName);
  std::vector<std::string> fresh;
  for (std::size_t i = 0; i < op.toCreate.size(); ++i) {
    std::string id;
    do {
      id = "e" + std::to_string(state_.nextId++);
    } while (state_.triple.contains(id));
    fresh.push_back(std::move(id));
  }
  auto marked = instantiate(op, m.mapping, fresh, state_.triple, state_.marking);

  RuleApplication app{state_.nextAppId++, m.ruleName, m.kind, m, std::move(fresh), std::move(marked),
                      state_.protocol.size()};
  state_.protocol.push_back(app);
  for (auto& st : state_.statuses) {
    if (st.ruleName == m.ruleName) ++st.appliedCount;
  }
  state_.pendingMatch.reset();
  recomputeMatches();
  return app;
}

DataPackage Session::package(const std::optional<RuleApplication>& last) const {
  DataPackage p;
  p.kind = state_.kind;
  p.lastApplication = last;
  p.statuses = state_.statuses;
  for (const auto& [rule, list] : matches_) p.availableMatches.emplace(rule, list);
  p.protocolLength = state_.protocol.size();
  p.mode = state_.mode;
  if (totalMatchCount() == 0) {
    if (auto unmarked = unmarkedElements(); !unmarked.empty()) {
      std::string msg = "INCOMPLETE: " + std::to_string(unmarked.size()) + " untranslated " +
                        (state_.kind == OperationKind::Fwd ? "source" : "target") + " elements:";
      for (const auto& id : unmarked) msg += " " + id;
      p.warnings.push_back(std::move(msg));
    }
  }
  return p;
}

DataPackage Session::overview() const {
  return package(state_.protocol.empty() ? std::nullopt : std::optional(state_.protocol.back()));
}

DataPackage Session::applyMatch(std::string_view matchId) {
  const Match* m = findAvailable(matchId);
  if (m == nullptr) {
    throw Error(ErrorCode::StaleMatch, "match '" + std::string(matchId) + "' is not available");
  }
  auto app = execute(*m);
  return package(app);
}

DataPackage Session::applyRandomMatch(const std::optional<std::string>& ruleName) {
  std::vector<const Match*> pool;
  if (ruleName) {
    for (const auto& m : matchesFor(*ruleName)) pool.push_back(&m);
  } else {
    for (const auto& [rule, list] : matches_) {
      for (const auto& m : list) pool.push_back(&m);
    }
  }
  if (pool.empty()) {
    throw Error(ErrorCode::NoMatch, ruleName ? "rule " + *ruleName + " has no match" : "no rule has a match");
  }
  auto app = execute(*pool[drawIndex(pool.size())]);
  return package(app);
}

void Session::setBreakpoint(Breakpoint bp) {
  if (bp.kind != BreakpointKind::StepCount) {
    if (state_.ruleset->findRule(bp.rule) == nullptr) {
      throw Error(ErrorCode::Argument, "breakpoint names unknown rule '" + bp.rule + "'");
    }
    bp.n = 0;
  } else {
    bp.rule.clear();
  }
  for (auto& existing : state_.breakpoints) {
    if (existing.sameTarget(bp)) {
      existing.enabled = bp.enabled;
      return;
    }
  }
  state_.breakpoints.push_back(std::move(bp));
}

bool Session::clearBreakpoint(const Breakpoint& bp) {
  auto it = std::find_if(state_.breakpoints.begin(), state_.breakpoints.end(),
                         [&](const Breakpoint& b) { return b.sameTarget(bp); });
  if (it == state_.breakpoints.end()) return false;
  state_.breakpoints.erase(it);
  return true;
}

DataPackage Session::runBackground(std::size_t maxSteps) {
  state_.mode = Mode::Background;
  std::size_t steps = 0;
  std::optional<RuleApplication> last;
  std::optional<HaltReason> halt;
  std::optional<Breakpoint> hit;

  auto enabled = [&](BreakpointKind kind, auto&& pred) -> std::optional<Breakpoint> {
    for (const auto& bp : state_.breakpoints) {
      if (bp.enabled && bp.kind == kind && pred(bp)) return bp;
    }
    return std::nullopt;
  };

  while (true) {
    if (auto bp = enabled(BreakpointKind::StepCount, [&](const Breakpoint& b) { return b.n == steps; })) {
      halt = HaltReason::Breakpoint;
      hit = bp;
      break;
    }
    if (steps >= maxSteps) {
      halt = HaltReason::MaxSteps;
      break;
    }
    if (totalMatchCount() == 0) {
      halt = HaltReason::Exhausted;
      break;
    }

    const Match* chosen = nullptr;
    bool resuming = false;
    if (state_.pendingMatch) {
      chosen = findAvailable(*state_.pendingMatch);
      resuming = chosen != nullptr;
      state_.pendingMatch.reset();
    }
    if (chosen == nullptr) {
      std::vector<const Match*> pool;
      for (const auto& [rule, list] : matches_) {
        for (const auto& m : list) pool.push_back(&m);
      }
      chosen = pool[drawIndex(pool.size())];
    }
    if (!resuming) {
      const auto& rule = chosen->ruleName;
      if (auto bp = enabled(BreakpointKind::RuleAboutToApply, [&](const Breakpoint& b) { return b.rule == rule; })) {
        state_.pendingMatch = chosen->id;
        halt = HaltReason::Breakpoint;
        hit = bp;
        break;
      }
    }

    std::map<std::string, bool> before;
    for (const auto& st : state_.statuses) before[st.ruleName] = st.everApplicable;
    last = execute(*chosen);
    ++steps;

    for (const auto& st : state_.statuses) {
      if (before[st.ruleName] || !st.everApplicable) continue;
      if (auto bp = enabled(BreakpointKind::RuleFirstApplicable,
                            [&](const Breakpoint& b) { return b.rule == st.ruleName; })) {
        halt = HaltReason::Breakpoint;
        hit = bp;
        break;
      }
    }
    if (halt) break;
  }

  state_.mode = Mode::Debug;
  auto p = package(last);
  p.haltReason = halt;
  p.triggeredBreakpoint = hit;
  return p;
}

}  // namespace tgg
