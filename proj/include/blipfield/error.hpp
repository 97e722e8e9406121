#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blipfield {

enum class ErrorCode {
  invalid_argument,
  resolution,             // packet width not resolvable on the grid
  boundary,               // packet support touches the periodic seam
  not_localized,          // no finite support radius within the grid
  outside_cavity,
  regulator,              // regulator must be strictly positive
  coincidence,            // real-space kernel evaluated at zero separation
  undefined_conditional,  // conditional probability with an empty state
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::boundary: return "boundary";
    case ErrorCode::not_localized: return "not_localized";
    case ErrorCode::outside_cavity: return "outside_cavity";
    case ErrorCode::regulator: return "regulator";
    case ErrorCode::coincidence: return "coincidence";
    case ErrorCode::undefined_conditional: return "undefined_conditional";
  }
  return "unknown";
}

/// Every precondition violation in the library is reported with this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace blipfield
