#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tggdbg/metamodel.hpp"

namespace tgg {

struct Node {
  std::string id;
  std::string type;
  Domain domain = Domain::Source;
  std::string label;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::string id;
  std::string type;
  Domain domain = Domain::Source;
  std::string source;
  std::string target;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct CorrLink {
  std::string id;
  std::string type;
  std::string source;  // node in the source graph
  std::string target;  // node in the target graph

  friend bool operator==(const CorrLink&, const CorrLink&) = default;
};

/// Source graph, target graph and the correspondence links between them.
/// Nodes and edges carry their domain; every id is unique across the triple.
/// Elements are stored sorted by id, so iteration order is canonical.
///
/// Dangling references are representable on purpose: conformance checking
/// reports them instead of the container rejecting them.
class TripleGraph {
 public:
  void addNode(Node n);
  void addEdge(Edge e);
  void addCorr(CorrLink c);

  /// Removes the element with this id, whatever its kind. Returns false if
  /// no such element exists.
  bool erase(std::string_view id);

  const Node* findNode(std::string_view id) const;
  const Edge* findEdge(std::string_view id) const;
  const CorrLink* findCorr(std::string_view id) const;

  bool contains(std::string_view id) const;
  /// Domain of any element; corr links belong to Correspondence.
  std::optional<Domain> domainOf(std::string_view id) const;

  const std::map<std::string, Node, std::less<>>& nodes() const { return nodes_; }
  const std::map<std::string, Edge, std::less<>>& edges() const { return edges_; }
  const std::map<std::string, CorrLink, std::less<>>& corrs() const { return corrs_; }

  std::size_t size() const { return nodes_.size() + edges_.size() + corrs_.size(); }
  bool empty() const { return size() == 0; }
  bool hasDomainContent(Domain d) const;

  friend bool operator==(const TripleGraph&, const TripleGraph&) = default;

 private:
  void requireFreshId(const std::string& id) const;

  std::map<std::string, Node, std::less<>> nodes_;
  std::map<std::string, Edge, std::less<>> edges_;
  std::map<std::string, CorrLink, std::less<>> corrs_;
};

/// Copy of `g` with the source and target domains exchanged; corr links
/// keep their ids and types with endpoints swapped.
TripleGraph swapDomains(const TripleGraph& g);

}  // namespace tgg
