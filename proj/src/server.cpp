#include "tggdbg/server.hpp"

#include "tggdbg/diagram.hpp"
#include "tggdbg/errors.hpp"
#include "tggdbg/view.hpp"

namespace tgg {

namespace {

const Json& param(const Json& params, std::string_view key) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw Error(ErrorCode::Argument, "missing parameter '" + std::string(key) + "'", "/params/" + std::string(key));
  }
  return *it;
}

std::string stringParam(const Json& params, std::string_view key) {
  const Json& v = param(params, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::Argument, "parameter '" + std::string(key) + "' must be a string",
                "/params/" + std::string(key));
  }
  return v.get<std::string>();
}

std::optional<std::string> optionalString(const Json& params, std::string_view key) {
  if (!params.contains(key) || params.at(std::string(key)).is_null()) return std::nullopt;
  return stringParam(params, key);
}

std::size_t countParam(const Json& params, std::string_view key) {
  const Json& v = param(params, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw Error(ErrorCode::Argument, "parameter '" + std::string(key) + "' must be a non-negative integer",
                "/params/" + std::string(key));
  }
  return v.get<std::size_t>();
}

DisplayOptions optionsParam(const Json& params) {
  return displayOptionsFromJson(params.contains("options") ? params.at("options") : Json(nullptr), "/params/options");
}

DiagramFormat formatParam(const Json& params) {
  auto f = optionalString(params, "format");
  return f ? diagramFormatFromString(*f) : DiagramFormat::PlantUml;
}

Breakpoint breakpointParam(const Json& params) {
  Breakpoint bp;
  try {
    bp = breakpointFromJson(params, "/params");
  } catch (const Error& e) {
    throw Error(ErrorCode::Argument, e.what(), e.path());
  }
  return bp;
}

Json viewBody(const ViewModel& view, DiagramFormat format) {
  Json body;
  body["view"] = toJson(view);
  body["diagram"] = renderDiagram(view, format);
  return body;
}

Json errorResponse(const Json& id, std::string_view code, const std::string& message, const std::string& path = {}) {
  Json r;
  r["id"] = id;
  r["ok"] = false;
  Json err;
  err["code"] = std::string(code);
  err["message"] = message;
  if (!path.empty()) err["path"] = path;
  r["error"] = std::move(err);
  return r;
}

Json dataPackageEvent(const DataPackage& p) {
  Json e;
  e["event"] = "dataPackage";
  e["body"] = toJson(p);
  return e;
}

}  // namespace

DebugServer::DebugServer(Session session) : session_(std::move(session)) {}

Reply DebugServer::handle(const Json& request) {
  std::lock_guard lock(mutex_);
  Json id = nullptr;
  if (request.is_object() && request.contains("id")) id = request.at("id");
  if (!request.is_object()) return {errorResponse(id, "ARGUMENT", "request must be an object"), std::nullopt};
  if (!id.is_number_integer()) return {errorResponse(id, "ARGUMENT", "request id must be an integer", "/id"), {}};
  if (!request.contains("type") || !request.at("type").is_string()) {
    return {errorResponse(id, "ARGUMENT", "request type must be a string", "/type"), std::nullopt};
  }
  const Json params = request.contains("params") ? request.at("params") : Json::object();
  if (!params.is_object()) return {errorResponse(id, "ARGUMENT", "params must be an object", "/params"), {}};

  std::optional<Json> event;
  try {
    Json body = dispatch(request.at("type").get<std::string>(), params, event);
    Json r;
    r["id"] = id;
    r["ok"] = true;
    r["body"] = std::move(body);
    return {std::move(r), std::move(event)};
  } catch (const Error& e) {
    return {errorResponse(id, toString(e.code()), e.what(), e.path()), std::nullopt};
  } catch (const Json::exception& e) {
    return {errorResponse(id, "ARGUMENT", e.what()), std::nullopt};
  } catch (const std::exception& e) {
    return {errorResponse(id, "INTERNAL", e.what()), std::nullopt};
  }
}

std::vector<std::string> DebugServer::handleLine(std::string_view line) {
  Json request;
  try {
    request = Json::parse(line.begin(), line.end());
  } catch (const Json::parse_error& e) {
    return {errorResponse(nullptr, "PARSE", std::string("malformed JSON at byte ") + std::to_string(e.byte)).dump()};
  }
  Reply reply = handle(request);
  std::vector<std::string> out{reply.response.dump()};
  if (reply.event) out.push_back(reply.event->dump());
  return out;
}

Json DebugServer::dispatch(const std::string& type, const Json& params, std::optional<Json>& event) {
  if (type == "hello") {
    Json body;
    body["protocolVersion"] = std::string(kProtocolVersion);
    body["operation"] = std::string(toString(session_.state().kind));
    body["ruleNames"] = session_.ruleset().ruleNames();
    return body;
  }
  if (type == "overview") return toJson(session_.overview());
  if (type == "matches") {
    Json body = Json::array();
    if (auto rule = optionalString(params, "rule")) {
      for (const auto& m : session_.matchesFor(*rule)) body.push_back(toJson(m));
    } else {
      for (const auto& name : session_.ruleset().ruleNames()) {
        for (const auto& m : session_.matchesFor(name)) body.push_back(toJson(m));
      }
    }
    return body;
  }
  if (type == "apply" || type == "applyRandom" || type == "resume") {
    DataPackage p;
    if (type == "apply") {
      try {
        p = session_.applyMatch(stringParam(params, "matchId"));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::StaleMatch) throw;
        throw Error(ErrorCode::StaleMatch, e.what(), "/params/matchId");
      }
    } else if (type == "applyRandom") {
      p = session_.applyRandomMatch(optionalString(params, "rule"));
    } else {
      p = session_.runBackground(countParam(params, "maxSteps"));
    }
    event = dataPackageEvent(p);
    Json body;
    body["protocolLength"] = p.protocolLength;
    body["lastApplication"] = p.lastApplication ? toJson(*p.lastApplication) : Json(nullptr);
    return body;
  }
  if (type == "breakpoint.set") {
    Breakpoint bp = breakpointParam(params);
    session_.setBreakpoint(bp);
    return toJson(bp);
  }
  if (type == "breakpoint.clear") {
    Json body;
    body["removed"] = session_.clearBreakpoint(breakpointParam(params));
    return body;
  }
  if (type == "protocol") {
    Json body = Json::array();
    for (const auto& app : session_.protocol()) body.push_back(toJson(app));
    return body;
  }
  if (type == "state") {
    const DisplayOptions opts = optionsParam(params);
    std::set<std::size_t> selection;
    if (params.contains("select")) {
      const Json& sel = params.at("select");
      if (!sel.is_array()) throw Error(ErrorCode::Argument, "select must be an array", "/params/select");
      for (const auto& k : sel) {
        if (!k.is_number_integer() || k.get<std::int64_t>() < 0) {
          throw Error(ErrorCode::Argument, "select entries must be non-negative integers", "/params/select");
        }
        selection.insert(k.get<std::size_t>());
      }
    }
    const SessionState& st = session_.state();
    ViewModel view = selection.empty()
                         ? buildModelView(st.triple, opts)
                         : buildProtocolView(*st.ruleset, st.initial, st.protocol, selection, opts);
    return viewBody(view, formatParam(params));
  }
  if (type == "ruleDiagram") {
    const std::string name = stringParam(params, "rule");
    const TGGRule* rule = session_.ruleset().findRule(name);
    if (rule == nullptr) throw Error(ErrorCode::Argument, "unknown rule '" + name + "'", "/params/rule");
    return viewBody(buildRuleView(*rule, optionsParam(params)), formatParam(params));
  }
  if (type == "matchDiagram") {
    const std::string matchId = stringParam(params, "matchId");
    const Match* m = session_.findAvailable(matchId);
    if (m == nullptr) throw Error(ErrorCode::StaleMatch, "match " + matchId + " is not available", "/params/matchId");
    const TGGRule& rule = *session_.ruleset().findRule(m->ruleName);
    return viewBody(buildMatchView(*m, rule, session_.triple(), optionsParam(params)), formatParam(params));
  }
  if (type == "snapshot.save") {
    Json body;
    body["document"] = Json::parse(saveSession(session_));
    return body;
  }
  if (type == "snapshot.load") {
    const Json& doc = param(params, "document");
    session_ = loadSession(doc.is_string() ? doc.get<std::string>() : doc.dump());
    event = dataPackageEvent(session_.overview());
    Json body;
    body["protocolLength"] = session_.protocol().size();
    return body;
  }
  if (type == "options.validate") return toJson(optionsParam(params));
  throw Error(ErrorCode::Argument, "unknown request type '" + type + "'", "/type");
}

}  // namespace tgg
