#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tgg {

enum class Domain { Source, Correspondence, Target };

std::string_view toString(Domain d);
Domain domainFromString(std::string_view s);  // throws Error(Argument)

/// The opposite model domain; the correspondence domain maps to itself.
Domain opposite(Domain d);

enum class UpperBound { One, Many };

std::string_view toString(UpperBound b);
UpperBound upperBoundFromString(std::string_view s);

struct NodeType {
  std::string name;
  bool abstract = false;
  std::optional<std::string> supertype;

  friend bool operator==(const NodeType&, const NodeType&) = default;
};

struct EdgeType {
  std::string name;
  std::string source;
  std::string target;
  UpperBound upperBound = UpperBound::Many;

  friend bool operator==(const EdgeType&, const EdgeType&) = default;
};

/// A single-domain metamodel: node types with single inheritance and typed,
/// directed edge types. Types are kept sorted by name.
class Metamodel {
 public:
  Metamodel() = default;
  Metamodel(std::string name, std::vector<NodeType> nodeTypes,
            std::vector<EdgeType> edgeTypes);

  const std::string& name() const { return name_; }
  const std::vector<NodeType>& nodeTypes() const { return nodeTypes_; }
  const std::vector<EdgeType>& edgeTypes() const { return edgeTypes_; }

  const NodeType* findNodeType(std::string_view name) const;
  const EdgeType* findEdgeType(std::string_view name) const;

  /// True iff `a == b` or `b` is reachable from `a` through supertype links.
  /// Throws Error(Lookup) when either type is undeclared.
  bool subtypeOf(std::string_view a, std::string_view b) const;

  /// Structural problems: duplicate names, unresolved references, supertype
  /// cycles. Empty for a well-formed metamodel.
  std::vector<std::string> problems() const;

  friend bool operator==(const Metamodel& a, const Metamodel& b) {
    return a.name_ == b.name_ && a.nodeTypes_ == b.nodeTypes_ &&
           a.edgeTypes_ == b.edgeTypes_;
  }

 private:
  std::string name_;
  std::vector<NodeType> nodeTypes_;
  std::vector<EdgeType> edgeTypes_;
  std::map<std::string, std::size_t, std::less<>> nodeIndex_;
  std::map<std::string, std::size_t, std::less<>> edgeIndex_;
};

struct CorrType {
  std::string name;
  std::string source;  // node type in the source metamodel
  std::string target;  // node type in the target metamodel

  friend bool operator==(const CorrType&, const CorrType&) = default;
};

class TripleMetamodel {
 public:
  TripleMetamodel() = default;
  TripleMetamodel(std::string name, Metamodel source, Metamodel target,
                  std::vector<CorrType> corrTypes);

  const std::string& name() const { return name_; }
  const Metamodel& source() const { return source_; }
  const Metamodel& target() const { return target_; }
  const std::vector<CorrType>& corrTypes() const { return corrTypes_; }

  /// Metamodel owning the given model domain. Throws for Correspondence.
  const Metamodel& side(Domain d) const;
  const CorrType* findCorrType(std::string_view name) const;

  std::vector<std::string> problems() const;

  friend bool operator==(const TripleMetamodel& a, const TripleMetamodel& b) {
    return a.name_ == b.name_ && a.source_ == b.source_ &&
           a.target_ == b.target_ && a.corrTypes_ == b.corrTypes_;
  }

 private:
  std::string name_;
  Metamodel source_;
  Metamodel target_;
  std::vector<CorrType> corrTypes_;
};

}  // namespace tgg
