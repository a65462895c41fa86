#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tggdbg/engine.hpp"
#include "tggdbg/matcher.hpp"
#include "tggdbg/rules.hpp"
#include "tggdbg/triple_graph.hpp"

namespace tgg {

enum class LabelMode { Full, Abbrev, None };
std::string_view toString(LabelMode m);
LabelMode labelModeFromString(std::string_view s);

struct DisplayOptions {
  bool showSource = true;
  bool showTarget = true;
  bool showCorrespondence = true;
  bool contextOnly = false;  // rules only
  LabelMode labelMode = LabelMode::Full;
  int neighborhoodK = 1;

  bool shows(Domain d) const;
  /// Throws Error(Argument) if neighborhoodK is outside [0, 3].
  void validate() const;

  friend bool operator==(const DisplayOptions&, const DisplayOptions&) = default;
};

/// FULL keeps the label, NONE hides it, ABBREV keeps labels of up to six
/// characters and shortens longer ones to first three + "..." + last three.
std::string abbreviateLabel(std::string_view label, LabelMode mode);

enum class Emphasis { Created, Context, Plain };
std::string_view toString(Emphasis e);

/// Which half of a side-by-side view an element belongs to.
enum class ViewPart { Rule, Model };
std::string_view toString(ViewPart p);

struct ViewNode {
  std::string id;         // unique within the view
  std::string elementId;  // rule variable or host element id
  ViewPart part = ViewPart::Model;
  Domain domain = Domain::Source;
  std::string label;  // as displayed
  Emphasis emphasis = Emphasis::Plain;

  friend bool operator==(const ViewNode&, const ViewNode&) = default;
};

struct ViewLink {
  std::string id;
  std::string elementId;
  ViewPart part = ViewPart::Model;
  Domain domain = Domain::Source;  // Correspondence for corr links
  std::string source;              // ViewNode ids
  std::string target;
  std::string label;
  Emphasis emphasis = Emphasis::Plain;

  friend bool operator==(const ViewLink&, const ViewLink&) = default;
};

struct MatchLink {
  std::string ruleNode;   // ViewNode id in the rule part
  std::string modelNode;  // ViewNode id in the model part

  friend bool operator==(const MatchLink&, const MatchLink&) = default;
};

/// Render-ready description of a rule, a match or a protocol state. Nodes
/// and links are sorted by view id.
struct ViewModel {
  std::vector<ViewNode> nodes;
  std::vector<ViewLink> edges;
  std::vector<ViewLink> corrs;
  std::vector<MatchLink> matchLinks;

  const ViewNode* findNode(std::string_view id) const;
  friend bool operator==(const ViewModel&, const ViewModel&) = default;
};

/// View ids are the element ids prefixed with "R_" (rule) or "M_" (model).
std::string viewId(ViewPart part, std::string_view elementId);

ViewModel buildRuleView(const TGGRule& rule, const DisplayOptions& opts);

/// Rule on one side, the k-neighborhood of the matched host nodes on the
/// other, joined by match links. Throws Error(StaleMatch) when the mapping
/// no longer fits the host.
ViewModel buildMatchView(const Match& match, const TGGRule& rule, const TripleGraph& host,
                         const DisplayOptions& opts);

/// State after the highest selected step, with everything the selected
/// steps created emphasized. Throws Error(Argument) for an empty selection
/// or an index past the protocol.
ViewModel buildProtocolView(const RuleSet& ruleset, const TripleGraph& initial, const Protocol& protocol,
                            const std::set<std::size_t>& selection, const DisplayOptions& opts);

/// Every element of `triple` that the options let through, unemphasized.
ViewModel buildModelView(const TripleGraph& triple, const DisplayOptions& opts);

}  // namespace tgg
