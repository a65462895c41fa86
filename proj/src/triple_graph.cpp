#include "tggdbg/triple_graph.hpp"

#include "tggdbg/errors.hpp"

namespace tgg {

void TripleGraph::requireFreshId(const std::string& id) const {
  if (id.empty()) throw Error(ErrorCode::Argument, "element id must not be empty");
  if (contains(id)) throw Error(ErrorCode::Argument, "duplicate element id '" + id + "'", id);
}

void TripleGraph::addNode(Node n) {
  requireFreshId(n.id);
  auto key = n.id;
  nodes_.emplace(std::move(key), std::move(n));
}

void TripleGraph::addEdge(Edge e) {
  requireFreshId(e.id);
  auto key = e.id;
  edges_.emplace(std::move(key), std::move(e));
}

void TripleGraph::addCorr(CorrLink c) {
  requireFreshId(c.id);
  auto key = c.id;
  corrs_.emplace(std::move(key), std::move(c));
}

bool TripleGraph::erase(std::string_view id) {
  if (auto it = nodes_.find(id); it != nodes_.end()) {
    nodes_.erase(it);
    return true;
  }
  if (auto it = edges_.find(id); it != edges_.end()) {
    edges_.erase(it);
    return true;
  }
  if (auto it = corrs_.find(id); it != corrs_.end()) {
    corrs_.erase(it);
    return true;
  }
  return false;
}

const Node* TripleGraph::findNode(std::string_view id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Edge* TripleGraph::findEdge(std::string_view id) const {
  auto it = edges_.find(id);
  return it == edges_.end() ? nullptr : &it->second;
}

const CorrLink* TripleGraph::findCorr(std::string_view id) const {
  auto it = corrs_.find(id);
  return it == corrs_.end() ? nullptr : &it->second;
}

bool TripleGraph::contains(std::string_view id) const {
  return nodes_.contains(id) || edges_.contains(id) || corrs_.contains(id);
}

std::optional<Domain> TripleGraph::domainOf(std::string_view id) const {
  if (const Node* n = findNode(id)) return n->domain;
  if (const Edge* e = findEdge(id)) return e->domain;
  if (corrs_.contains(id)) return Domain::Correspondence;
  return std::nullopt;
}

bool TripleGraph::hasDomainContent(Domain d) const {
  if (d == Domain::Correspondence) return !corrs_.empty();
  for (const auto& [id, n] : nodes_) {
    if (n.domain == d) return true;
  }
  for (const auto& [id, e] : edges_) {
    if (e.domain == d) return true;
  }
  return false;
}

TripleGraph swapDomains(const TripleGraph& g) {
  TripleGraph out;
  for (const auto& [id, n] : g.nodes()) {
    Node copy = n;
    copy.domain = opposite(n.domain);
    out.addNode(std::move(copy));
  }
  for (const auto& [id, e] : g.edges()) {
    Edge copy = e;
    copy.domain = opposite(e.domain);
    out.addEdge(std::move(copy));
  }
  for (const auto& [id, c] : g.corrs()) {
    out.addCorr({c.id, c.type, c.target, c.source});
  }
  return out;
}

}  // namespace tgg
