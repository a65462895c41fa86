#include "tggdbg/rules.hpp"

#include <algorithm>

#include "tggdbg/errors.hpp"

namespace tgg {

std::string_view toString(Annotation a) { return a == Annotation::Green ? "GREEN" : "BLACK"; }

Annotation annotationFromString(std::string_view s) {
  if (s == "GREEN") return Annotation::Green;
  if (s == "BLACK") return Annotation::Black;
  throw Error(ErrorCode::Argument, "unknown annotation '" + std::string(s) + "'");
}

std::string_view toString(OperationKind k) {
  switch (k) {
    case OperationKind::Gen: return "GEN";
    case OperationKind::Fwd: return "FWD";
    case OperationKind::Bwd: return "BWD";
  }
  return "?";
}

OperationKind operationKindFromString(std::string_view s) {
  if (s == "GEN" || s == "gen") return OperationKind::Gen;
  if (s == "FWD" || s == "fwd") return OperationKind::Fwd;
  if (s == "BWD" || s == "bwd") return OperationKind::Bwd;
  throw Error(ErrorCode::Argument, "unknown operation kind '" + std::string(s) + "'");
}

Annotation TGGRule::annotationOf(std::string_view elementId) const {
  auto it = annotations.find(elementId);
  if (it == annotations.end()) {
    throw Error(ErrorCode::Lookup,
                "rule " + name + " has no annotation for '" + std::string(elementId) + "'",
                std::string(elementId));
  }
  return it->second;
}

bool TGGRule::isAxiom() const {
  return std::none_of(annotations.begin(), annotations.end(),
                      [](const auto& kv) { return kv.second == Annotation::Black; });
}

std::vector<std::string> TGGRule::elementIds() const {
  std::vector<std::string> ids;
  ids.reserve(pattern.size());
  for (const auto& [id, n] : pattern.nodes()) ids.push_back(id);
  for (const auto& [id, e] : pattern.edges()) ids.push_back(id);
  for (const auto& [id, c] : pattern.corrs()) ids.push_back(id);
  return ids;
}

TGGRule swapDomains(const TGGRule& rule) {
  return {rule.name, swapDomains(rule.pattern), rule.annotations};
}

namespace {

// Annotation and closure checks; independent of any metamodel.
std::vector<Violation> structuralViolations(const TGGRule& rule) {
  std::vector<Violation> out;
  const auto ids = rule.elementIds();
  for (const auto& id : ids) {
    if (!rule.annotations.contains(id)) {
      out.push_back({ViolationKind::MissingAnnotation, {id}, "rule element '" + id + "' has no annotation"});
    }
  }
  for (const auto& [id, a] : rule.annotations) {
    if (!rule.pattern.contains(id)) {
      out.push_back({ViolationKind::MissingAnnotation, {id}, "annotation for unknown rule element '" + id + "'"});
    }
  }

  auto isGreen = [&](const std::string& id) {
    auto it = rule.annotations.find(id);
    return it != rule.annotations.end() && it->second == Annotation::Green;
  };
  auto isBlack = [&](const std::string& id) {
    auto it = rule.annotations.find(id);
    return it != rule.annotations.end() && it->second == Annotation::Black;
  };
  auto closure = [&](const std::string& id, const std::string& s, const std::string& t) {
    if (!isBlack(id)) return;
    std::vector<std::string> offenders;
    if (isGreen(s)) offenders.push_back(s);
    if (isGreen(t) && t != s) offenders.push_back(t);
    if (offenders.empty()) return;
    std::vector<std::string> named{id};
    named.insert(named.end(), offenders.begin(), offenders.end());
    out.push_back({ViolationKind::ContextClosure, named,
                   "context element '" + id + "' depends on created node '" + offenders.front() + "'"});
  };
  for (const auto& [id, e] : rule.pattern.edges()) closure(id, e.source, e.target);
  for (const auto& [id, c] : rule.pattern.corrs()) closure(id, c.source, c.target);

  if (std::none_of(ids.begin(), ids.end(), isGreen)) {
    out.push_back({ViolationKind::NoEffect, {}, "rule " + rule.name + " creates nothing"});
  }
  return out;
}

}  // namespace

std::vector<Violation> validateRule(const TGGRule& rule, const TripleMetamodel& mm) {
  auto out = checkConformance(rule.pattern, mm);
  auto structural = structuralViolations(rule);
  out.insert(out.end(), structural.begin(), structural.end());
  return out;
}

bool OperationalRule::inContext(std::string_view id) const {
  return std::find(context.begin(), context.end(), id) != context.end();
}
bool OperationalRule::isMarked(std::string_view id) const {
  return std::find(toMark.begin(), toMark.end(), id) != toMark.end();
}
bool OperationalRule::isCreated(std::string_view id) const {
  return std::find(toCreate.begin(), toCreate.end(), id) != toCreate.end();
}

OperationalRule operationalize(const TGGRule& rule, OperationKind kind) {
  if (auto v = structuralViolations(rule); !v.empty()) {
    throw Error(ErrorCode::Validation, "rule " + rule.name + " is malformed: " + v.front().message,
                v.front().elementIds.empty() ? std::string{} : v.front().elementIds.front());
  }
  OperationalRule op{rule.name, kind, rule, {}, {}, {}};
  // The domain whose green elements become marked context, if any.
  std::optional<Domain> translated;
  if (kind == OperationKind::Fwd) translated = Domain::Source;
  if (kind == OperationKind::Bwd) translated = Domain::Target;

  for (const auto& id : rule.elementIds()) {
    if (rule.annotationOf(id) == Annotation::Black) {
      op.context.push_back(id);
    } else if (translated && rule.pattern.domainOf(id) == translated) {
      op.context.push_back(id);
      op.toMark.push_back(id);
    } else {
      op.toCreate.push_back(id);
    }
  }
  return op;
}

const TGGRule* RuleSet::findRule(std::string_view ruleName) const {
  auto it = std::find_if(rules.begin(), rules.end(), [&](const TGGRule& r) { return r.name == ruleName; });
  return it == rules.end() ? nullptr : &*it;
}

std::vector<std::string> RuleSet::ruleNames() const {
  std::vector<std::string> names;
  for (const auto& r : rules) names.push_back(r.name);
  return names;
}

std::vector<std::string> validateRuleSet(const RuleSet& rs) {
  std::vector<std::string> out;
  for (auto& p : rs.metamodel.problems()) out.push_back("metamodel: " + p);
  std::vector<std::string> names;
  for (const auto& r : rs.rules) {
    if (std::find(names.begin(), names.end(), r.name) != names.end()) {
      out.push_back("duplicate rule name '" + r.name + "'");
    }
    names.push_back(r.name);
    for (const auto& v : validateRule(r, rs.metamodel)) {
      out.push_back(r.name + ": " + std::string(toString(v.kind)) + ": " + v.message);
    }
  }
  return out;
}

}  // namespace tgg
