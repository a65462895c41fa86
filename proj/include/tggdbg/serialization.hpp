#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tggdbg/engine.hpp"
#include "tggdbg/metamodel.hpp"
#include "tggdbg/rules.hpp"
#include "tggdbg/triple_graph.hpp"
#include "tggdbg/view.hpp"

namespace tgg {

/// Keys keep insertion order, which is the fixed schema order on output.
using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "1";

enum class DocumentKind { Metamodel, Ruleset, Triple, Protocol, Session };
std::string_view toString(DocumentKind k);
DocumentKind documentKindFromString(std::string_view s);

/// Parses an envelope {formatVersion, kind, payload} and returns the payload.
/// Throws Error(Parse) with the byte offset for malformed JSON,
/// Error(Version), Error(Kind) or Error(Schema) otherwise.
Json openDocument(std::string_view text, DocumentKind expected);

/// Canonical text: 2-space indentation, LF line endings, trailing newline.
std::string writeDocument(DocumentKind kind, const Json& payload);

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, std::string_view text);

// Metamodels -----------------------------------------------------------------

Json toJson(const TripleMetamodel& mm);
TripleMetamodel metamodelFromJson(const Json& j, const std::string& path);
std::string saveMetamodel(const TripleMetamodel& mm);
TripleMetamodel loadMetamodel(std::string_view text);

// Triples ----------------------------------------------------------------------

Json toJson(const TripleGraph& g);
/// Structure only; types are resolved by loadTriple / checkConformance.
TripleGraph tripleFromJson(const Json& j, const std::string& path);
std::string saveTriple(const TripleGraph& g);
/// Parses and checks conformance against `mm`. Undeclared types raise
/// Error(Reference), other violations Error(Validation); both carry the
/// JSON path of the offending element.
TripleGraph loadTriple(std::string_view text, const TripleMetamodel& mm);

// Rule sets ------------------------------------------------------------------

Json toJson(const TGGRule& rule);
Json toJson(const RuleSet& rs);
/// With `check`, the first rule violation is raised as a located error;
/// without, rules are only parsed (see validateRuleSet).
RuleSet ruleSetFromJson(const Json& j, const std::string& path, bool check = true);
std::string saveRuleSet(const RuleSet& rs);
RuleSet loadRuleSet(std::string_view text, bool check = true);

// Protocols ------------------------------------------------------------------

struct ProtocolDocument {
  std::string ruleset;  // rule set name
  OperationKind kind = OperationKind::Gen;
  TripleGraph initial;
  Protocol applications;

  friend bool operator==(const ProtocolDocument&, const ProtocolDocument&) = default;
};

Json toJson(const Match& m);
Json toJson(const RuleApplication& app);
RuleApplication applicationFromJson(const Json& j, const std::string& path);
std::string saveProtocol(const ProtocolDocument& doc);
/// Resolves rule names against `rs` and replays the whole protocol once to
/// check that every entry fits.
ProtocolDocument loadProtocol(std::string_view text, const RuleSet& rs);
ProtocolDocument protocolOf(const Session& s);

// Sessions -------------------------------------------------------------------

Json toJson(const Breakpoint& bp);
Breakpoint breakpointFromJson(const Json& j, const std::string& path);
Json toJson(const RuleStatus& st);
Json toJson(const DataPackage& p);

std::string saveSession(const Session& s);
Session loadSession(std::string_view text);

// Views ----------------------------------------------------------------------

Json toJson(const DisplayOptions& o);
/// Missing keys take their defaults; unknown keys are schema errors.
DisplayOptions displayOptionsFromJson(const Json& j, const std::string& path);
Json toJson(const ViewModel& v);

}  // namespace tgg
