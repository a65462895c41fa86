#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tggdbg/conformance.hpp"
#include "tggdbg/engine.hpp"
#include "tggdbg/errors.hpp"
#include "tggdbg/serialization.hpp"

namespace tgg {
namespace {

using testing::companySource;
using testing::companyToIt;

const RuleStatus& status(const DataPackage& p, const std::string& rule) {
  for (const auto& st : p.statuses) {
    if (st.ruleName == rule) return st;
  }
  throw std::runtime_error("no status for " + rule);
}

Session gen(std::uint64_t seed = 1) { return Session::create(companyToIt(), OperationKind::Gen, {}, seed); }
Session fwd(int admins, int employees, std::uint64_t seed = 1) {
  return Session::create(companyToIt(), OperationKind::Fwd, companySource(admins, employees), seed);
}

ErrorCode codeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Argument;
}

TEST(Session, EmptyGenOffersOnlyTheAxiom) {
  const auto p = gen().overview();
  EXPECT_EQ(p.mode, Mode::Debug);
  for (const auto& st : p.statuses) {
    const bool axiom = st.ruleName == "CompanyToITRule";
    EXPECT_EQ(st.currentMatchCount, axiom ? 1u : 0u) << st.ruleName;
    EXPECT_EQ(st.everApplicable, axiom) << st.ruleName;
    EXPECT_EQ(p.availableMatches.at(st.ruleName).size(), st.currentMatchCount);
  }
}

TEST(Session, ForwardStartsWithTheAxiomOnly) {
  const auto p = fwd(2, 0).overview();
  EXPECT_EQ(status(p, "CompanyToITRule").currentMatchCount, 1u);
  EXPECT_EQ(status(p, "AdminToRouterRule").currentMatchCount, 0u);
}

TEST(Session, CreateChecksItsInput) {
  TripleGraph twoCeos = companySource(0, 0);
  twoCeos.addNode({"boss2", "CEO", Domain::Source, ""});
  twoCeos.addEdge({"c_boss2", "ceo", Domain::Source, "c", "boss2"});
  EXPECT_EQ(codeOf([&] { Session::create(companyToIt(), OperationKind::Gen, twoCeos, 1); }),
            ErrorCode::Validation);
  EXPECT_EQ(codeOf([&] { Session::create(companyToIt(), OperationKind::Gen, companySource(1, 0), 1); }),
            ErrorCode::Argument);
  EXPECT_EQ(codeOf([&] { Session::create(companyToIt(), OperationKind::Bwd, companySource(1, 0), 1); }),
            ErrorCode::Argument);
}

TEST(Session, ApplyingTheAxiomCreatesFiveElements) {
  Session s = gen();
  const auto p = s.applyMatch(s.matchesFor("CompanyToITRule").front().id);
  ASSERT_TRUE(p.lastApplication);
  EXPECT_EQ(p.lastApplication->createdElementIds, (std::vector<std::string>{"e1", "e2", "e3", "e4", "e5"}));
  EXPECT_EQ(p.lastApplication->appId, 1u);
  EXPECT_EQ(p.lastApplication->stepIndex, 0u);
  EXPECT_EQ(p.protocolLength, 1u);
  EXPECT_TRUE(checkConformance(s.triple(), companyToIt()->metamodel).empty());
}

TEST(Session, CompetingEmployeeMatchesInvalidateEachOther) {
  Session s = fwd(1, 1);
  s.applyRandomMatch("CompanyToITRule");
  s.applyRandomMatch("AdminToRouterRule");
  ASSERT_EQ(s.matchesFor("EmployeeToPCRule").size(), 1u);
  ASSERT_EQ(s.matchesFor("EmployeeToLaptopRule").size(), 1u);
  const auto p = s.applyMatch(s.matchesFor("EmployeeToPCRule").front().id);
  EXPECT_EQ(status(p, "EmployeeToLaptopRule").currentMatchCount, 0u);
  EXPECT_TRUE(s.unmarkedElements().empty());
}

TEST(Session, ApplyingAMatchTwiceIsStale) {
  Session s = fwd(1, 0);
  const std::string id = s.matchesFor("CompanyToITRule").front().id;
  s.applyMatch(id);
  EXPECT_EQ(codeOf([&] { s.applyMatch(id); }), ErrorCode::StaleMatch);
  EXPECT_EQ(codeOf([&] { s.applyMatch("nonsense"); }), ErrorCode::StaleMatch);
}

TEST(Session, RandomApplication) {
  Session s = gen(42);
  const auto p = s.applyRandomMatch();
  EXPECT_EQ(p.lastApplication->ruleName, "CompanyToITRule");
  EXPECT_EQ(codeOf([&] { s.applyRandomMatch("CompanyToITRule"); s.applyRandomMatch("NoSuchRule"); }),
            ErrorCode::Argument);

  Session f = fwd(2, 0, 42);
  EXPECT_EQ(codeOf([&] { f.applyRandomMatch("AdminToRouterRule"); }), ErrorCode::NoMatch);
  f.applyRandomMatch();
  Session again = f;
  EXPECT_EQ(f.applyRandomMatch(), again.applyRandomMatch());
}

TEST(Session, ForwardRunExhaustsAfterFourSteps) {
  Session s = fwd(2, 1);
  const auto p = s.runBackground(100);
  EXPECT_EQ(p.haltReason, HaltReason::Exhausted);
  EXPECT_EQ(p.protocolLength, 4u);
  EXPECT_EQ(p.mode, Mode::Debug);
  EXPECT_TRUE(p.warnings.empty());
  EXPECT_TRUE(s.unmarkedElements().empty());
}

TEST(Session, UntranslatableSourceIsReportedIncomplete) {
  Session s = fwd(0, 1);
  const auto p = s.runBackground(100);
  EXPECT_EQ(p.haltReason, HaltReason::Exhausted);
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_EQ(p.warnings[0].rfind("INCOMPLETE", 0), 0u);
  EXPECT_EQ(s.unmarkedElements(), (std::vector<std::string>{"c_emp1", "emp1", "emp1_boss"}));
}

TEST(Session, GenRunsUntilMaxSteps) {
  Session s = gen(3);
  const auto p = s.runBackground(50);
  EXPECT_EQ(p.haltReason, HaltReason::MaxSteps);
  EXPECT_EQ(p.protocolLength, 50u);
  EXPECT_EQ(p.mode, Mode::Debug);
}

TEST(Session, FirstApplicableBreakpointHaltsAfterFirstAdmin) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Session s = gen(seed);
    s.setBreakpoint({BreakpointKind::RuleFirstApplicable, "EmployeeToPCRule", 0, true});
    const auto p = s.runBackground(100);
    EXPECT_EQ(p.haltReason, HaltReason::Breakpoint);
    ASSERT_TRUE(p.triggeredBreakpoint);
    EXPECT_EQ(p.triggeredBreakpoint->rule, "EmployeeToPCRule");
    EXPECT_GE(status(p, "EmployeeToPCRule").currentMatchCount, 1u);
    EXPECT_EQ(status(p, "AdminToRouterRule").appliedCount, 1u);
    EXPECT_EQ(p.lastApplication->ruleName, "AdminToRouterRule");
  }
}

TEST(Session, StepCountZeroHaltsImmediately) {
  Session s = gen();
  s.setBreakpoint({BreakpointKind::StepCount, "", 0, true});
  const auto p = s.runBackground(10);
  EXPECT_EQ(p.haltReason, HaltReason::Breakpoint);
  EXPECT_EQ(p.protocolLength, 0u);
}

TEST(Session, StepCountCountsApplicationsOfTheRun) {
  Session s = gen();
  s.runBackground(2);
  s.setBreakpoint({BreakpointKind::StepCount, "", 3, true});
  const auto p = s.runBackground(10);
  EXPECT_EQ(p.haltReason, HaltReason::Breakpoint);
  EXPECT_EQ(p.protocolLength, 5u);
}

TEST(Session, AboutToApplyHaltsBeforeTheApplication) {
  Session s = gen(8);
  s.setBreakpoint({BreakpointKind::RuleAboutToApply, "AdminToRouterRule", 0, true});
  const auto p = s.runBackground(10);
  EXPECT_EQ(p.haltReason, HaltReason::Breakpoint);
  EXPECT_EQ(status(p, "AdminToRouterRule").appliedCount, 0u);
  ASSERT_TRUE(s.state().pendingMatch);
  const std::string pending = *s.state().pendingMatch;

  // Resuming runs the match the breakpoint stopped on.
  s.clearBreakpoint({BreakpointKind::RuleAboutToApply, "AdminToRouterRule", 0, true});
  const auto q = s.runBackground(1);
  EXPECT_EQ(q.lastApplication->match.id, pending);
}

TEST(Session, ClearedBreakpointNeverHalts) {
  Session s = gen();
  const Breakpoint bp{BreakpointKind::RuleAboutToApply, "AdminToRouterRule", 0, true};
  s.setBreakpoint(bp);
  EXPECT_TRUE(s.clearBreakpoint(bp));
  EXPECT_FALSE(s.clearBreakpoint(bp));
  EXPECT_EQ(s.runBackground(20).haltReason, HaltReason::MaxSteps);
}

TEST(Session, BreakpointOnUnknownRuleIsRejected) {
  Session s = gen();
  EXPECT_EQ(codeOf([&] { s.setBreakpoint({BreakpointKind::RuleFirstApplicable, "NoSuchRule", 0, true}); }),
            ErrorCode::Argument);
}

TEST(Session, InvariantsHoldAlongRandomRuns) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto kind : {OperationKind::Gen, OperationKind::Fwd}) {
      Session s = kind == OperationKind::Gen ? gen(seed) : fwd(3, 3, seed);
      std::vector<TripleGraph> states{s.triple()};
      std::map<std::string, bool> ever;
      for (int step = 0; step < 25 && s.totalMatchCount() > 0; ++step) {
        const auto p = s.applyRandomMatch();
        ASSERT_TRUE(checkConformance(s.triple(), companyToIt()->metamodel).empty());
        for (const auto& st : p.statuses) {
          const auto fresh = findMatches(s.operational(st.ruleName), s.triple(), s.marking(),
                                         companyToIt()->metamodel);
          EXPECT_EQ(st.currentMatchCount, fresh.size());
          EXPECT_EQ(p.availableMatches.at(st.ruleName), fresh);
          EXPECT_TRUE(st.everApplicable || !ever[st.ruleName]);
          ever[st.ruleName] = st.everApplicable;
          EXPECT_LE(st.appliedCount, p.protocolLength);
        }
        states.push_back(s.triple());
      }
      for (std::size_t k = 0; k < states.size(); ++k) {
        EXPECT_EQ(replay(*companyToIt(), s.state().initial, s.protocol(), k).triple, states[k]);
      }
      std::set<std::string> created;
      for (const auto& app : s.protocol()) {
        for (const auto& id : app.createdElementIds) EXPECT_TRUE(created.insert(id).second);
        for (const auto& [ruleId, hostId] : app.match.mapping) EXPECT_FALSE(
            std::find(app.createdElementIds.begin(), app.createdElementIds.end(), hostId) !=
            app.createdElementIds.end());
      }
    }
  }
}

TEST(Session, ReplayRejectsBadProtocols) {
  Session s = fwd(1, 0);
  s.runBackground(10);
  EXPECT_EQ(codeOf([&] { replay(*companyToIt(), s.state().initial, s.protocol(), 5); }), ErrorCode::Argument);
  Protocol broken = s.protocol();
  broken[1].match.mapping["admin"] = "nobody";
  EXPECT_EQ(codeOf([&] { replay(*companyToIt(), s.state().initial, broken, 2); }), ErrorCode::Reference);
}

TEST(Session, SameSeedSameProtocol) {
  Session a = fwd(3, 3, 77), b = fwd(3, 3, 77);
  a.runBackground(100);
  b.runBackground(100);
  EXPECT_EQ(a.protocol(), b.protocol());
  EXPECT_EQ(a.triple(), b.triple());
}

TEST(Session, SnapshotRoundTripIsObservationallyEqual) {
  Session s = gen(5);
  s.runBackground(4);
  s.setBreakpoint({BreakpointKind::StepCount, "", 6, true});
  Session restored = loadSession(saveSession(s));
  EXPECT_EQ(restored.overview(), s.overview());
  EXPECT_EQ(saveSession(restored), saveSession(s));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(restored.applyRandomMatch(), s.applyRandomMatch());
  EXPECT_EQ(restored.runBackground(20), s.runBackground(20));
}

TEST(Session, SnapshotsAllowBranching) {
  Session s = fwd(2, 2, 1);
  s.runBackground(2);
  const std::string snapshot = saveSession(s);
  Session a = loadSession(snapshot);
  Session b = loadSession(snapshot);
  const auto& matches = a.matchesFor("AdminToRouterRule");
  ASSERT_GE(matches.size(), 1u);
  a.applyMatch(a.matchesFor("EmployeeToPCRule").front().id);
  b.applyMatch(b.matchesFor("EmployeeToLaptopRule").front().id);
  EXPECT_NE(a.triple(), b.triple());
  EXPECT_EQ(Protocol(a.protocol().begin(), a.protocol().begin() + 2),
            Protocol(b.protocol().begin(), b.protocol().begin() + 2));
  EXPECT_TRUE(checkConformance(a.triple(), companyToIt()->metamodel).empty());
  EXPECT_TRUE(checkConformance(b.triple(), companyToIt()->metamodel).empty());
}

TEST(Session, TruncatedSnapshotIsAParseError) {
  Session s = gen();
  s.runBackground(3);
  const std::string text = saveSession(s);
  try {
    loadSession(text.substr(0, text.size() / 2));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
}

}  // namespace
}  // namespace tgg
