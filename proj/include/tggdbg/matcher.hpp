#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tggdbg/metamodel.hpp"
#include "tggdbg/rules.hpp"
#include "tggdbg/triple_graph.hpp"

namespace tgg {

/// Rule element id -> host element id, over the rule's context pattern.
using Mapping = std::map<std::string, std::string, std::less<>>;

struct Match {
  std::string id;  // ruleName + "#" + 16 hex digits
  std::string ruleName;
  OperationKind kind = OperationKind::Gen;
  Mapping mapping;

  friend bool operator==(const Match&, const Match&) = default;
};

/// Which host elements have already been translated.
struct MarkingState {
  std::set<std::string, std::less<>> source;
  std::set<std::string, std::less<>> target;

  bool isMarked(std::string_view id) const { return source.contains(id) || target.contains(id); }

  friend bool operator==(const MarkingState&, const MarkingState&) = default;
};

struct MatchOptions {
  bool injective = true;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

/// Deterministic match id: the rule name plus the FNV-1a digest of
/// "KIND;" followed by "ruleId=hostId" pairs (sorted by rule id, comma
/// separated).
std::string matchIdFor(std::string_view ruleName, OperationKind kind, const Mapping& mapping);

/// All matches of `op`'s context pattern in `host`, sorted by the host ids
/// in canonical rule-element order.
///
/// A mapping qualifies when it is injective, each host node's type is a
/// subtype of its rule node's type, edges and corrs agree with the node
/// images, the marking constraints hold (FWD: marked-to-be images are
/// unmarked and black source images are marked; BWD mirrored; GEN ignores
/// marking), and creating the green elements keeps every ONE-bounded edge
/// type at most once per source node.
std::vector<Match> findMatches(const OperationalRule& op, const TripleGraph& host,
                               const MarkingState& marking, const TripleMetamodel& mm,
                               const MatchOptions& options = {});

/// True iff findMatches would currently produce `m`.
bool isStillValid(const Match& m, const OperationalRule& op, const TripleGraph& host,
                  const MarkingState& marking, const TripleMetamodel& mm,
                  const MatchOptions& options = {});

}  // namespace tgg
