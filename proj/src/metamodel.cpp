#include "tggdbg/metamodel.hpp"

#include <algorithm>
#include <set>

#include "tggdbg/errors.hpp"

namespace tgg {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::Argument: return "ARGUMENT";
    case ErrorCode::Lookup: return "LOOKUP";
    case ErrorCode::Validation: return "VALIDATION";
    case ErrorCode::StaleMatch: return "STALE_MATCH";
    case ErrorCode::NoMatch: return "NO_MATCH";
    case ErrorCode::Schema: return "SCHEMA";
    case ErrorCode::Reference: return "REFERENCE";
    case ErrorCode::Version: return "VERSION";
    case ErrorCode::Kind: return "KIND";
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

std::string_view toString(Domain d) {
  switch (d) {
    case Domain::Source: return "SOURCE";
    case Domain::Correspondence: return "CORRESPONDENCE";
    case Domain::Target: return "TARGET";
  }
  return "?";
}

Domain domainFromString(std::string_view s) {
  if (s == "SOURCE") return Domain::Source;
  if (s == "CORRESPONDENCE") return Domain::Correspondence;
  if (s == "TARGET") return Domain::Target;
  throw Error(ErrorCode::Argument, "unknown domain '" + std::string(s) + "'");
}

Domain opposite(Domain d) {
  switch (d) {
    case Domain::Source: return Domain::Target;
    case Domain::Target: return Domain::Source;
    case Domain::Correspondence: return Domain::Correspondence;
  }
  return d;
}

std::string_view toString(UpperBound b) {
  return b == UpperBound::One ? "ONE" : "MANY";
}

UpperBound upperBoundFromString(std::string_view s) {
  if (s == "ONE") return UpperBound::One;
  if (s == "MANY") return UpperBound::Many;
  throw Error(ErrorCode::Argument, "unknown upper bound '" + std::string(s) + "'");
}

Metamodel::Metamodel(std::string name, std::vector<NodeType> nodeTypes,
                     std::vector<EdgeType> edgeTypes)
    : name_(std::move(name)),
      nodeTypes_(std::move(nodeTypes)),
      edgeTypes_(std::move(edgeTypes)) {
  auto byName = [](const auto& a, const auto& b) { return a.name < b.name; };
  std::stable_sort(nodeTypes_.begin(), nodeTypes_.end(), byName);
  std::stable_sort(edgeTypes_.begin(), edgeTypes_.end(), byName);
  // First declaration wins on duplicates; problems() reports them.
  for (std::size_t i = 0; i < nodeTypes_.size(); ++i) nodeIndex_.emplace(nodeTypes_[i].name, i);
  for (std::size_t i = 0; i < edgeTypes_.size(); ++i) edgeIndex_.emplace(edgeTypes_[i].name, i);
}

const NodeType* Metamodel::findNodeType(std::string_view name) const {
  auto it = nodeIndex_.find(name);
  return it == nodeIndex_.end() ? nullptr : &nodeTypes_[it->second];
}

const EdgeType* Metamodel::findEdgeType(std::string_view name) const {
  auto it = edgeIndex_.find(name);
  return it == edgeIndex_.end() ? nullptr : &edgeTypes_[it->second];
}

bool Metamodel::subtypeOf(std::string_view a, std::string_view b) const {
  const NodeType* cur = findNodeType(a);
  if (cur == nullptr) {
    throw Error(ErrorCode::Lookup, "unknown node type '" + std::string(a) + "' in metamodel " + name_);
  }
  if (findNodeType(b) == nullptr) {
    throw Error(ErrorCode::Lookup, "unknown node type '" + std::string(b) + "' in metamodel " + name_);
  }
  // The step bound guards against cyclic chains in malformed metamodels.
  for (std::size_t steps = 0; cur != nullptr && steps <= nodeTypes_.size(); ++steps) {
    if (cur->name == b) return true;
    if (!cur->supertype) return false;
    cur = findNodeType(*cur->supertype);
  }
  return false;
}

std::vector<std::string> Metamodel::problems() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : nodeTypes_) {
    if (!seen.insert(t.name).second) out.push_back("duplicate node type '" + t.name + "'");
  }
  seen.clear();
  for (const auto& t : edgeTypes_) {
    if (!seen.insert(t.name).second) out.push_back("duplicate edge type '" + t.name + "'");
  }
  for (const auto& t : nodeTypes_) {
    if (t.supertype && findNodeType(*t.supertype) == nullptr) {
      out.push_back("node type '" + t.name + "' has unknown supertype '" + *t.supertype + "'");
    }
  }
  for (const auto& t : nodeTypes_) {
    std::set<std::string> chain{t.name};
    const NodeType* cur = &t;
    while (cur->supertype) {
      cur = findNodeType(*cur->supertype);
      if (cur == nullptr) break;
      if (!chain.insert(cur->name).second) {
        out.push_back("supertype cycle through '" + t.name + "'");
        break;
      }
    }
  }
  for (const auto& e : edgeTypes_) {
    if (findNodeType(e.source) == nullptr) {
      out.push_back("edge type '" + e.name + "' has unknown source type '" + e.source + "'");
    }
    if (findNodeType(e.target) == nullptr) {
      out.push_back("edge type '" + e.name + "' has unknown target type '" + e.target + "'");
    }
  }
  return out;
}

TripleMetamodel::TripleMetamodel(std::string name, Metamodel source, Metamodel target,
                                 std::vector<CorrType> corrTypes)
    : name_(std::move(name)),
      source_(std::move(source)),
      target_(std::move(target)),
      corrTypes_(std::move(corrTypes)) {
  std::stable_sort(corrTypes_.begin(), corrTypes_.end(),
                   [](const auto& a, const auto& b) { return a.name < b.name; });
}

const Metamodel& TripleMetamodel::side(Domain d) const {
  switch (d) {
    case Domain::Source: return source_;
    case Domain::Target: return target_;
    case Domain::Correspondence: break;
  }
  throw Error(ErrorCode::Argument, "the correspondence domain has no metamodel");
}

const CorrType* TripleMetamodel::findCorrType(std::string_view name) const {
  auto it = std::lower_bound(corrTypes_.begin(), corrTypes_.end(), name,
                             [](const CorrType& c, std::string_view n) { return c.name < n; });
  return (it != corrTypes_.end() && it->name == name) ? &*it : nullptr;
}

std::vector<std::string> TripleMetamodel::problems() const {
  std::vector<std::string> out;
  for (auto& p : source_.problems()) out.push_back("source: " + p);
  for (auto& p : target_.problems()) out.push_back("target: " + p);
  std::set<std::string> seen;
  for (const auto& c : corrTypes_) {
    if (!seen.insert(c.name).second) out.push_back("duplicate corr type '" + c.name + "'");
    if (source_.findNodeType(c.source) == nullptr) {
      out.push_back("corr type '" + c.name + "' has unknown source type '" + c.source + "'");
    }
    if (target_.findNodeType(c.target) == nullptr) {
      out.push_back("corr type '" + c.name + "' has unknown target type '" + c.target + "'");
    }
  }
  return out;
}

}  // namespace tgg
