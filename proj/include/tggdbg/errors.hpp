#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tgg {

enum class ErrorCode {
  Argument,
  Lookup,
  Validation,
  StaleMatch,
  NoMatch,
  Schema,
  Reference,
  Version,
  Kind,
  Parse,
  Io,
};

std::string_view toString(ErrorCode code);

/// Base exception for every failure the library reports. `path()` locates
/// the offending spot when one exists: a JSON pointer for documents, an
/// element id for graph problems, empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {})
      : std::runtime_error(message), code_(code), path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

}  // namespace tgg
