#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cftg {

/// Domain error carrying a stable machine-readable code ("RankMismatch",
/// "UnknownSymbol", ...) next to the human-readable message. The CLI prints
/// the code on stderr and exits 1.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void raise(std::string code, const std::string& message) {
  throw Error(std::move(code), message);
}

/// Non-throwing validation finding, used by validate_grammar and friends.
struct Diagnostic {
  enum class Severity { Warning, Error };
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
};

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

}  // namespace cftg
