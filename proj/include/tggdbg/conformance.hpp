#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tggdbg/metamodel.hpp"
#include "tggdbg/triple_graph.hpp"

namespace tgg {

enum class ViolationKind {
  UnknownType,
  AbstractInstance,
  DanglingEdge,
  DomainMismatch,
  EndpointType,
  UpperBound,
  // rule-level
  MissingAnnotation,
  ContextClosure,
  NoEffect,
};

std::string_view toString(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::vector<std::string> elementIds;  // sorted, except CONTEXT_CLOSURE names the context element first
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every broken metamodel constraint in `triple`. Empty iff conformant.
/// Violations are ordered by element id of the first offender.
std::vector<Violation> checkConformance(const TripleGraph& triple,
                                        const TripleMetamodel& mm);

}  // namespace tgg
