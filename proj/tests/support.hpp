#pragma once

// Fixture access and brute-force oracles shared by the unit tests and the
// acceptance runner. The oracles deliberately avoid the library's search
// code: they enumerate candidates exhaustively and check each predicate
// directly.

#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tggdbg/engine.hpp"
#include "tggdbg/matcher.hpp"
#include "tggdbg/rules.hpp"
#include "tggdbg/triple_graph.hpp"
#include "tggdbg/view.hpp"

namespace tgg::testing {

std::filesystem::path fixturePath(const std::string& name);
std::filesystem::path goldenPath(const std::string& name);

/// The CompanyToIT rule set, loaded once.
std::shared_ptr<const RuleSet> companyToIt();

/// Source model with a Company "c", CEO "boss", Admins a1..aN and
/// Employees emp1..empM, each with their admins/employees and reportsTo
/// edges.
TripleGraph companySource(int admins, int employees);

/// Element count per type in one domain.
std::map<std::string, int> typeCounts(const TripleGraph& g, Domain d);

/// Every mapping a matcher must return, in the required order.
std::vector<Mapping> bruteForceMatches(const OperationalRule& op, const TripleGraph& host,
                                       const MarkingState& marking, const TripleMetamodel& mm,
                                       bool injective = true);

/// Neighborhood through Floyd-Warshall distances.
std::set<std::string> neighborhoodOracle(const TripleGraph& g, const std::set<std::string>& seeds, int k);

/// A conformant fixture host: a short random GEN derivation, then random
/// element deletions (dangling links removed with their endpoints), with
/// a random marking over what remains. At most `maxNodes` nodes.
struct RandomHost {
  TripleGraph triple;
  MarkingState marking;
};
RandomHost randomHost(std::mt19937_64& rng, const RuleSet& rs, std::size_t maxNodes);

/// Uniformly random DisplayOptions.
DisplayOptions randomOptions(std::mt19937_64& rng);

/// Plays the fixed debugging script against a FWD server on the
/// 2-Admin/1-Employee source: hello, overview, apply the axiom, re-apply it,
/// set a first-applicable breakpoint on EmployeeToPCRule, resume, protocol.
/// Returns the wire lines, prefixed "> " (client) or "< " (server).
std::vector<std::string> scriptedForwardTranscript();

/// Replaces match hashes and application ids with placeholders.
std::string normalizeTranscript(const std::string& text);

/// Runs every maximal derivation reachable from `s` (each available match
/// tried at each step) and hands each finished session to `visit`.
template <typename Visit>
void forEachMaximalRun(const Session& s, Visit&& visit) {
  std::vector<Match> all;
  for (const auto& name : s.ruleset().ruleNames()) {
    for (const auto& m : s.matchesFor(name)) all.push_back(m);
  }
  if (all.empty()) {
    visit(s);
    return;
  }
  for (const auto& m : all) {
    Session next = s;
    next.applyMatch(m.id);
    forEachMaximalRun(next, visit);
  }
}

}  // namespace tgg::testing
