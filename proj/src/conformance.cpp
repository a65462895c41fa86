#include "tggdbg/conformance.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace tgg {

std::string_view toString(ViolationKind k) {
  switch (k) {
    case ViolationKind::UnknownType: return "UNKNOWN_TYPE";
    case ViolationKind::AbstractInstance: return "ABSTRACT_INSTANCE";
    case ViolationKind::DanglingEdge: return "DANGLING_EDGE";
    case ViolationKind::DomainMismatch: return "DOMAIN_MISMATCH";
    case ViolationKind::EndpointType: return "ENDPOINT_TYPE";
    case ViolationKind::UpperBound: return "UPPER_BOUND";
    case ViolationKind::MissingAnnotation: return "MISSING_ANNOTATION";
    case ViolationKind::ContextClosure: return "CONTEXT_CLOSURE";
    case ViolationKind::NoEffect: return "NO_EFFECT";
  }
  return "?";
}

namespace {

class Checker {
 public:
  Checker(const TripleGraph& g, const TripleMetamodel& mm) : g_(g), mm_(mm) {}

  std::vector<Violation> run() {
    for (const auto& [id, n] : g_.nodes()) checkNode(n);
    for (const auto& [id, e] : g_.edges()) checkEdge(e);
    for (const auto& [id, c] : g_.corrs()) checkCorr(c);
    checkUpperBounds();
    std::stable_sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
      return std::tie(a.elementIds, a.kind) < std::tie(b.elementIds, b.kind);
    });
    return std::move(out_);
  }

 private:
  void add(ViolationKind kind, std::vector<std::string> ids, std::string message) {
    std::sort(ids.begin(), ids.end());
    out_.push_back({kind, std::move(ids), std::move(message)});
  }

  void checkNode(const Node& n) {
    if (n.domain == Domain::Correspondence) {
      add(ViolationKind::DomainMismatch, {n.id}, "node '" + n.id + "' placed in the correspondence domain");
      return;
    }
    const NodeType* t = mm_.side(n.domain).findNodeType(n.type);
    if (t == nullptr) {
      add(ViolationKind::UnknownType, {n.id},
          "node '" + n.id + "' has undeclared type '" + n.type + "'");
    } else if (t->abstract) {
      add(ViolationKind::AbstractInstance, {n.id},
          "node '" + n.id + "' instantiates abstract type '" + n.type + "'");
    }
  }

  // Reports a missing or misplaced endpoint; returns the node when usable.
  const Node* endpoint(const std::string& owner, const std::string& nodeId, Domain expected,
                       std::string_view role) {
    const Node* n = g_.findNode(nodeId);
    if (n == nullptr) {
      add(ViolationKind::DanglingEdge, {owner, nodeId},
          "'" + owner + "' " + std::string(role) + " '" + nodeId + "' does not exist");
      return nullptr;
    }
    if (n->domain != expected) {
      add(ViolationKind::DomainMismatch, {owner, nodeId},
          "'" + owner + "' " + std::string(role) + " '" + nodeId + "' is in the " +
              std::string(toString(n->domain)) + " domain");
      return nullptr;
    }
    return n;
  }

  bool conforms(const Metamodel& mm, const Node& n, const std::string& declared) const {
    return mm.findNodeType(n.type) != nullptr && mm.findNodeType(declared) != nullptr &&
           mm.subtypeOf(n.type, declared);
  }

  void checkEdge(const Edge& e) {
    if (e.domain == Domain::Correspondence) {
      add(ViolationKind::DomainMismatch, {e.id}, "edge '" + e.id + "' placed in the correspondence domain");
      return;
    }
    const Metamodel& mm = mm_.side(e.domain);
    const EdgeType* t = mm.findEdgeType(e.type);
    if (t == nullptr) {
      add(ViolationKind::UnknownType, {e.id}, "edge '" + e.id + "' has undeclared type '" + e.type + "'");
    }
    const Node* s = endpoint(e.id, e.source, e.domain, "source");
    const Node* d = endpoint(e.id, e.target, e.domain, "target");
    if (t == nullptr) return;
    if (s != nullptr && mm.findNodeType(s->type) != nullptr && !conforms(mm, *s, t->source)) {
      add(ViolationKind::EndpointType, {e.id, s->id},
          "edge '" + e.id + "' of type '" + t->name + "' needs a " + t->source + " source, got " + s->type);
    }
    if (d != nullptr && mm.findNodeType(d->type) != nullptr && !conforms(mm, *d, t->target)) {
      add(ViolationKind::EndpointType, {e.id, d->id},
          "edge '" + e.id + "' of type '" + t->name + "' needs a " + t->target + " target, got " + d->type);
    }
  }

  void checkCorr(const CorrLink& c) {
    const CorrType* t = mm_.findCorrType(c.type);
    if (t == nullptr) {
      add(ViolationKind::UnknownType, {c.id}, "corr '" + c.id + "' has undeclared type '" + c.type + "'");
    }
    const Node* s = endpoint(c.id, c.source, Domain::Source, "source");
    const Node* d = endpoint(c.id, c.target, Domain::Target, "target");
    if (t == nullptr) return;
    if (s != nullptr && mm_.source().findNodeType(s->type) != nullptr &&
        !conforms(mm_.source(), *s, t->source)) {
      add(ViolationKind::EndpointType, {c.id, s->id},
          "corr '" + c.id + "' of type '" + t->name + "' needs a " + t->source + " source, got " + s->type);
    }
    if (d != nullptr && mm_.target().findNodeType(d->type) != nullptr &&
        !conforms(mm_.target(), *d, t->target)) {
      add(ViolationKind::EndpointType, {c.id, d->id},
          "corr '" + c.id + "' of type '" + t->name + "' needs a " + t->target + " target, got " + d->type);
    }
  }

  void checkUpperBounds() {
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> outgoing;
    for (const auto& [id, e] : g_.edges()) {
      if (e.domain == Domain::Correspondence) continue;
      const EdgeType* t = mm_.side(e.domain).findEdgeType(e.type);
      if (t != nullptr && t->upperBound == UpperBound::One) {
        outgoing[{e.source, e.type}].push_back(e.id);
      }
    }
    for (auto& [key, ids] : outgoing) {
      if (ids.size() > 1) {
        add(ViolationKind::UpperBound, ids,
            "node '" + key.first + "' has " + std::to_string(ids.size()) + " outgoing '" + key.second +
                "' edges, at most one allowed");
      }
    }
  }

  const TripleGraph& g_;
  const TripleMetamodel& mm_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> checkConformance(const TripleGraph& triple, const TripleMetamodel& mm) {
  return Checker(triple, mm).run();
}

}  // namespace tgg
