#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tggdbg/matcher.hpp"
#include "tggdbg/rules.hpp"
#include "tggdbg/triple_graph.hpp"

namespace tgg {

/// One executed rule application: the how-provenance atom.
struct RuleApplication {
  std::uint64_t appId = 0;
  std::string ruleName;
  OperationKind kind = OperationKind::Gen;
  Match match;
  std::vector<std::string> createdElementIds;  // toCreate order
  std::vector<std::string> markedElementIds;
  std::size_t stepIndex = 0;

  friend bool operator==(const RuleApplication&, const RuleApplication&) = default;
};

using Protocol = std::vector<RuleApplication>;

struct RuleStatus {
  std::string ruleName;
  std::size_t currentMatchCount = 0;
  std::size_t appliedCount = 0;
  bool everApplicable = false;  // latches

  friend bool operator==(const RuleStatus&, const RuleStatus&) = default;
};

enum class Mode { Background, Debug };
std::string_view toString(Mode m);
Mode modeFromString(std::string_view s);

enum class BreakpointKind { RuleFirstApplicable, RuleAboutToApply, StepCount };
std::string_view toString(BreakpointKind k);
BreakpointKind breakpointKindFromString(std::string_view s);

struct Breakpoint {
  BreakpointKind kind = BreakpointKind::StepCount;
  std::string rule;     // rule-targeted kinds only
  std::uint64_t n = 0;  // STEP_COUNT only
  bool enabled = true;

  /// Identity ignores `enabled`.
  bool sameTarget(const Breakpoint& o) const {
    return kind == o.kind && rule == o.rule && n == o.n;
  }
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

enum class HaltReason { Exhausted, Breakpoint, MaxSteps };
std::string_view toString(HaltReason h);
HaltReason haltReasonFromString(std::string_view s);

/// Per-step snapshot handed to clients.
struct DataPackage {
  OperationKind kind = OperationKind::Gen;
  std::optional<RuleApplication> lastApplication;
  std::vector<RuleStatus> statuses;
  std::map<std::string, std::vector<Match>> availableMatches;
  std::size_t protocolLength = 0;
  Mode mode = Mode::Debug;
  std::optional<HaltReason> haltReason;
  std::optional<Breakpoint> triggeredBreakpoint;
  std::vector<std::string> warnings;

  friend bool operator==(const DataPackage&, const DataPackage&) = default;
};

/// Everything needed to resume a session; what a snapshot persists.
struct SessionState {
  std::shared_ptr<const RuleSet> ruleset;
  OperationKind kind = OperationKind::Gen;
  TripleGraph initial;
  TripleGraph triple;
  MarkingState marking;
  Protocol protocol;
  Mode mode = Mode::Debug;
  std::vector<Breakpoint> breakpoints;
  std::vector<RuleStatus> statuses;
  std::uint64_t seed = 0;
  std::uint64_t rngDraws = 0;
  std::uint64_t nextId = 1;
  std::uint64_t nextAppId = 1;
  // Match chosen by a RULE_ABOUT_TO_APPLY halt; the next resume runs it.
  std::optional<std::string> pendingMatch;
};

/// A transformation session over one rule set. Commands are executed one
/// at a time; every command returns the resulting DataPackage.
class Session {
 public:
  /// Throws Error(Validation) for a non-conformant input and
  /// Error(Argument) when the input has content the operation must create.
  static Session create(std::shared_ptr<const RuleSet> ruleset, OperationKind kind,
                        TripleGraph input, std::uint64_t seed);

  /// Resumes from persisted state; statuses and marking are checked against
  /// the triple and matches are recomputed.
  explicit Session(SessionState state);

  DataPackage overview() const;

  /// Throws Error(StaleMatch) if the id is not among the current matches.
  DataPackage applyMatch(std::string_view matchId);

  /// Uniform choice over the sorted match list of one rule, or of all rules.
  /// Throws Error(NoMatch) when there is nothing to choose from.
  DataPackage applyRandomMatch(const std::optional<std::string>& ruleName = std::nullopt);

  /// Applies random matches until exhaustion, a breakpoint or `maxSteps`.
  DataPackage runBackground(std::size_t maxSteps);

  /// Throws Error(Argument) for rule-targeted breakpoints on unknown rules.
  void setBreakpoint(Breakpoint bp);
  /// Returns false if no such breakpoint was set.
  bool clearBreakpoint(const Breakpoint& bp);

  const SessionState& state() const { return state_; }
  const RuleSet& ruleset() const { return *state_.ruleset; }
  const TripleGraph& triple() const { return state_.triple; }
  const MarkingState& marking() const { return state_.marking; }
  const Protocol& protocol() const { return state_.protocol; }
  Mode mode() const { return state_.mode; }

  const OperationalRule& operational(std::string_view ruleName) const;
  const std::vector<Match>& matchesFor(std::string_view ruleName) const;
  const Match* findAvailable(std::string_view matchId) const;
  std::size_t totalMatchCount() const;

  /// Elements of the translated domain that no application has marked yet;
  /// empty for GEN.
  std::vector<std::string> unmarkedElements() const;

 private:
  Session() = default;
  void initialize();
  void recomputeMatches();
  RuleApplication execute(const Match& m);
  std::uint64_t drawIndex(std::uint64_t bound);
  DataPackage package(const std::optional<RuleApplication>& last) const;

  SessionState state_;
  std::mt19937_64 rng_;
  std::map<std::string, OperationalRule, std::less<>> operational_;
  std::map<std::string, std::vector<Match>, std::less<>> matches_;
};

/// Instantiates `op` for `mapping`: creates the toCreate elements under
/// `freshIds` (same order) and marks the images of toMark. Returns the
/// marked host ids. Throws std::logic_error when an element would be marked
/// twice.
std::vector<std::string> instantiate(const OperationalRule& op, const Mapping& mapping,
                                     const std::vector<std::string>& freshIds, TripleGraph& triple,
                                     MarkingState& marking);

struct ReplayState {
  TripleGraph triple;
  MarkingState marking;
};

/// Re-executes the first `count` protocol entries on `initial` from their
/// recorded matches and created ids, without matching. Throws
/// Error(Argument) for count beyond the protocol and Error(Reference) when
/// an entry does not fit the state it is replayed on.
ReplayState replay(const RuleSet& ruleset, const TripleGraph& initial, const Protocol& protocol,
                   std::size_t count);

}  // namespace tgg
