#include "tggdbg/matcher.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace tgg {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string matchIdFor(std::string_view ruleName, OperationKind kind, const Mapping& mapping) {
  std::string canonical(toString(kind));
  canonical += ';';
  bool first = true;
  for (const auto& [ruleId, hostId] : mapping) {
    if (!first) canonical += ',';
    first = false;
    canonical += ruleId;
    canonical += '=';
    canonical += hostId;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return std::string(ruleName) + "#" + hex;
}

namespace {

// Rule-side link: an edge or a corr of the context pattern.
struct RuleLink {
  std::string id;
  bool isCorr;
  std::string type;
  Domain domain;
  std::string source;
  std::string target;
};

// Host-side link view shared by edges and corrs.
struct HostLink {
  const std::string* id;
  bool isCorr;
  const std::string* type;
  Domain domain;
  const std::string* source;
  const std::string* target;
};

class Search {
 public:
  Search(const OperationalRule& op, const TripleGraph& host, const MarkingState& marking,
         const TripleMetamodel& mm, const MatchOptions& options)
      : op_(op), host_(host), marking_(marking), mm_(mm), options_(options) {
    const auto& pattern = op.rule.pattern;
    for (const auto& id : op.context) {
      if (const Node* n = pattern.findNode(id)) {
        ruleNodes_.push_back(n);
      } else if (const Edge* e = pattern.findEdge(id)) {
        ruleLinks_.push_back({e->id, false, e->type, e->domain, e->source, e->target});
      } else if (const CorrLink* c = pattern.findCorr(id)) {
        ruleLinks_.push_back({c->id, true, c->type, Domain::Correspondence, c->source, c->target});
      }
    }
    for (const auto& [id, e] : host.edges()) {
      links_.push_back({&e.id, false, &e.type, e.domain, &e.source, &e.target});
    }
    for (const auto& [id, c] : host.corrs()) {
      links_.push_back({&c.id, true, &c.type, Domain::Correspondence, &c.source, &c.target});
    }
    for (const auto& l : links_) {
      outgoing_[*l.source].push_back(&l);
      incoming_[*l.target].push_back(&l);
    }
  }

  std::vector<Match> run() {
    if (!ruleFeasibleAtAll()) return {};
    for (const Node* rn : ruleNodes_) {
      auto& cands = typeCandidates_[rn->id];
      for (const auto& [id, hn] : host_.nodes()) {
        if (nodeOk(*rn, hn)) cands.push_back(&hn);
      }
      if (cands.empty()) return {};
    }
    orderNodes();
    placeNode(0);

    std::sort(found_.begin(), found_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Match> out;
    out.reserve(found_.size());
    for (auto& [key, mapping] : found_) {
      Match m{matchIdFor(op_.name, op_.kind, mapping), op_.name, op_.kind, std::move(mapping)};
      out.push_back(std::move(m));
    }
    return out;
  }

  // Full check of a given mapping; used for re-validation.
  bool verify(const Mapping& mapping) {
    if (mapping.size() != op_.context.size()) return false;
    for (const auto& id : op_.context) {
      if (!mapping.contains(id)) return false;
    }
    std::unordered_set<std::string_view> usedNodes;
    for (const Node* rn : ruleNodes_) {
      const Node* hn = host_.findNode(mapping.find(rn->id)->second);
      if (hn == nullptr || !nodeOk(*rn, *hn)) return false;
      if (options_.injective && !usedNodes.insert(hn->id).second) return false;
      assignment_[rn->id] = hn;
    }
    std::unordered_set<std::string_view> usedLinks;
    for (const auto& rl : ruleLinks_) {
      const auto& hostId = mapping.find(rl.id)->second;
      const HostLink* hl = nullptr;
      for (const auto& l : links_) {
        if (*l.id == hostId) hl = &l;
      }
      if (hl == nullptr || !linkOk(rl, *hl)) return false;
      if (options_.injective && !usedLinks.insert(*hl->id).second) return false;
    }
    return ruleFeasibleAtAll() && feasible(mapping);
  }

 private:
  bool markingOk(const std::string& ruleId, const std::string& hostId, Domain domain) const {
    std::optional<Domain> translated;
    if (op_.kind == OperationKind::Fwd) translated = Domain::Source;
    if (op_.kind == OperationKind::Bwd) translated = Domain::Target;
    if (!translated || domain != *translated) return true;
    const auto& marks = domain == Domain::Source ? marking_.source : marking_.target;
    const bool marked = marks.contains(hostId);
    return op_.isMarked(ruleId) ? !marked : marked;
  }

  bool nodeOk(const Node& rn, const Node& hn) const {
    if (hn.domain != rn.domain || hn.domain == Domain::Correspondence) return false;
    const Metamodel& mm = mm_.side(hn.domain);
    if (mm.findNodeType(hn.type) == nullptr || mm.findNodeType(rn.type) == nullptr) return false;
    return mm.subtypeOf(hn.type, rn.type) && markingOk(rn.id, hn.id, hn.domain);
  }

  bool linkOk(const RuleLink& rl, const HostLink& hl) const {
    if (rl.isCorr != hl.isCorr || rl.domain != hl.domain || rl.type != *hl.type) return false;
    auto s = assignment_.find(rl.source);
    auto t = assignment_.find(rl.target);
    if (s == assignment_.end() || t == assignment_.end()) return false;
    if (s->second->id != *hl.source || t->second->id != *hl.target) return false;
    return markingOk(rl.id, *hl.id, rl.domain);
  }

  // Created edges from a created node with a ONE bound cannot be duplicated
  // whatever the host looks like.
  bool ruleFeasibleAtAll() const {
    std::map<std::pair<std::string, std::string>, int> count;
    for (const auto& id : op_.toCreate) {
      const Edge* e = op_.rule.pattern.findEdge(id);
      if (e == nullptr) continue;
      const EdgeType* t = mm_.side(e->domain).findEdgeType(e->type);
      if (t != nullptr && t->upperBound == UpperBound::One && ++count[{e->source, e->type}] > 1) {
        return false;
      }
    }
    return true;
  }

  bool feasible(const Mapping& mapping) const {
    for (const auto& id : op_.toCreate) {
      const Edge* e = op_.rule.pattern.findEdge(id);
      if (e == nullptr || !op_.inContext(e->source)) continue;
      const EdgeType* t = mm_.side(e->domain).findEdgeType(e->type);
      if (t == nullptr || t->upperBound != UpperBound::One) continue;
      const std::string& image = mapping.find(e->source)->second;
      auto it = outgoing_.find(image);
      if (it == outgoing_.end()) continue;
      for (const HostLink* l : it->second) {
        if (!l->isCorr && *l->type == e->type) return false;
      }
    }
    return true;
  }

  std::size_t linkCount(const std::string& nodeId) const {
    std::size_t n = 0;
    for (const auto& l : ruleLinks_) n += (l.source == nodeId) + (l.target == nodeId);
    return n;
  }

  // Most-constrained first: fewest candidates, then most links; each next
  // node prefers one linked to an already placed node.
  void orderNodes() {
    std::vector<const Node*> rest = ruleNodes_;
    auto placed = [&](const std::string& id) {
      return std::any_of(order_.begin(), order_.end(), [&](const Node* n) { return n->id == id; });
    };
    while (!rest.empty()) {
      auto score = [&](const Node* n) {
        std::size_t anchored = 0;
        for (const auto& l : ruleLinks_) {
          if ((l.source == n->id && placed(l.target)) || (l.target == n->id && placed(l.source))) {
            ++anchored;
          }
        }
        return std::make_tuple(anchored == 0, typeCandidates_[n->id].size(),
                               static_cast<std::size_t>(-linkCount(n->id)), n->id);
      };
      auto best = std::min_element(rest.begin(), rest.end(),
                                   [&](const Node* a, const Node* b) { return score(a) < score(b); });
      order_.push_back(*best);
      rest.erase(best);
    }
  }

  std::vector<const Node*> candidatesFor(const Node& rn) const {
    for (const auto& l : ruleLinks_) {
      const bool fromPlaced = l.target == rn.id && assignment_.contains(l.source);
      const bool toPlaced = l.source == rn.id && assignment_.contains(l.target);
      if (!fromPlaced && !toPlaced) continue;
      const auto& anchor = fromPlaced ? assignment_.at(l.source)->id : assignment_.at(l.target)->id;
      const auto& index = fromPlaced ? outgoing_ : incoming_;
      std::vector<const Node*> out;
      auto it = index.find(anchor);
      if (it == index.end()) return out;
      for (const HostLink* hl : it->second) {
        if (hl->isCorr != l.isCorr || *hl->type != l.type) continue;
        const Node* other = host_.findNode(fromPlaced ? *hl->target : *hl->source);
        if (other != nullptr && std::find(out.begin(), out.end(), other) == out.end()) {
          out.push_back(other);
        }
      }
      return out;
    }
    return typeCandidates_.at(rn.id);
  }

  bool linksSatisfiable(const Node& rn) const {
    for (const auto& l : ruleLinks_) {
      if (l.source != rn.id && l.target != rn.id) continue;
      if (!assignment_.contains(l.source) || !assignment_.contains(l.target)) continue;
      auto it = outgoing_.find(assignment_.at(l.source)->id);
      if (it == outgoing_.end()) return false;
      const bool any = std::any_of(it->second.begin(), it->second.end(),
                                   [&](const HostLink* hl) { return linkOk(l, *hl); });
      if (!any) return false;
    }
    return true;
  }

  void placeNode(std::size_t i) {
    if (i == order_.size()) {
      placeLink(0);
      return;
    }
    const Node& rn = *order_[i];
    for (const Node* hn : candidatesFor(rn)) {
      if (options_.injective && usedNodes_.contains(hn->id)) continue;
      if (!nodeOk(rn, *hn)) continue;
      assignment_[rn.id] = hn;
      if (linksSatisfiable(rn)) {
        usedNodes_.insert(hn->id);
        placeNode(i + 1);
        usedNodes_.erase(hn->id);
      }
      assignment_.erase(rn.id);
    }
  }

  void placeLink(std::size_t i) {
    if (i == ruleLinks_.size()) {
      emit();
      return;
    }
    const RuleLink& rl = ruleLinks_[i];
    auto it = outgoing_.find(assignment_.at(rl.source)->id);
    if (it == outgoing_.end()) return;
    for (const HostLink* hl : it->second) {
      if (options_.injective && usedLinks_.contains(*hl->id)) continue;
      if (!linkOk(rl, *hl)) continue;
      linkAssignment_[rl.id] = hl->id;
      usedLinks_.insert(*hl->id);
      placeLink(i + 1);
      usedLinks_.erase(*hl->id);
      linkAssignment_.erase(rl.id);
    }
  }

  void emit() {
    Mapping mapping;
    for (const auto& [ruleId, hn] : assignment_) mapping.emplace(ruleId, hn->id);
    for (const auto& [ruleId, hostId] : linkAssignment_) mapping.emplace(ruleId, *hostId);
    if (!feasible(mapping)) return;
    std::vector<std::string> key;
    key.reserve(op_.context.size());
    for (const auto& id : op_.context) key.push_back(mapping.at(id));
    found_.emplace_back(std::move(key), std::move(mapping));
  }

  const OperationalRule& op_;
  const TripleGraph& host_;
  const MarkingState& marking_;
  const TripleMetamodel& mm_;
  MatchOptions options_;

  std::vector<const Node*> ruleNodes_;
  std::vector<RuleLink> ruleLinks_;
  std::vector<HostLink> links_;
  std::unordered_map<std::string_view, std::vector<const HostLink*>> outgoing_;
  std::unordered_map<std::string_view, std::vector<const HostLink*>> incoming_;
  std::map<std::string, std::vector<const Node*>> typeCandidates_;
  std::vector<const Node*> order_;

  std::map<std::string, const Node*> assignment_;
  std::map<std::string, const std::string*> linkAssignment_;
  std::unordered_set<std::string_view> usedNodes_;
  std::unordered_set<std::string_view> usedLinks_;
  std::vector<std::pair<std::vector<std::string>, Mapping>> found_;
};

}  // namespace

std::vector<Match> findMatches(const OperationalRule& op, const TripleGraph& host,
                               const MarkingState& marking, const TripleMetamodel& mm,
                               const MatchOptions& options) {
  return Search(op, host, marking, mm, options).run();
}

bool isStillValid(const Match& m, const OperationalRule& op, const TripleGraph& host,
                  const MarkingState& marking, const TripleMetamodel& mm, const MatchOptions& options) {
  if (m.ruleName != op.name || m.kind != op.kind) return false;
  if (m.id != matchIdFor(m.ruleName, m.kind, m.mapping)) return false;
  return Search(op, host, marking, mm, options).verify(m.mapping);
}

}  // namespace tgg
