#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tggdbg/conformance.hpp"
#include "tggdbg/metamodel.hpp"
#include "tggdbg/triple_graph.hpp"

namespace tgg {

/// Green elements are created by a rule, black ones are required context.
enum class Annotation { Green, Black };

std::string_view toString(Annotation a);
Annotation annotationFromString(std::string_view s);

/// A declarative triple rule. The pattern is an ordinary triple graph whose
/// element ids act as rule variables; every element carries an annotation.
struct TGGRule {
  std::string name;
  TripleGraph pattern;
  std::map<std::string, Annotation, std::less<>> annotations;

  /// Throws Error(Lookup) for ids without an annotation.
  Annotation annotationOf(std::string_view elementId) const;
  bool isAxiom() const;

  /// Element ids in canonical order: nodes, then edges, then corrs, each
  /// group sorted by id.
  std::vector<std::string> elementIds() const;

  friend bool operator==(const TGGRule&, const TGGRule&) = default;
};

/// Rule copy with source and target exchanged.
TGGRule swapDomains(const TGGRule& rule);

/// Empty iff the rule is well formed and typed against `mm`.
std::vector<Violation> validateRule(const TGGRule& rule, const TripleMetamodel& mm);

enum class OperationKind { Gen, Fwd, Bwd };

std::string_view toString(OperationKind k);
OperationKind operationKindFromString(std::string_view s);

/// A rule re-partitioned for one operation. All id lists are in canonical
/// rule-element order.
struct OperationalRule {
  std::string name;
  OperationKind kind = OperationKind::Gen;
  TGGRule rule;
  std::vector<std::string> context;  // must be matched in the host
  std::vector<std::string> toMark;   // subset of context; marked on application
  std::vector<std::string> toCreate; // instantiated fresh on application

  bool inContext(std::string_view id) const;
  bool isMarked(std::string_view id) const;
  bool isCreated(std::string_view id) const;
};

/// Derives the GEN, FWD or BWD form. GEN matches black elements and creates
/// green ones; FWD additionally matches (and marks) the green source
/// elements; BWD mirrors FWD. Throws Error(Validation) for malformed rules.
OperationalRule operationalize(const TGGRule& rule, OperationKind kind);

/// A rule set together with the triple metamodel it is typed over.
struct RuleSet {
  std::string name;
  TripleMetamodel metamodel;
  std::vector<TGGRule> rules;  // sorted by name

  const TGGRule* findRule(std::string_view name) const;
  std::vector<std::string> ruleNames() const;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

/// Metamodel problems and per-rule violations, each prefixed with where
/// they occur. Empty for a usable rule set.
std::vector<std::string> validateRuleSet(const RuleSet& rs);

}  // namespace tgg
