#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvebound {

/// Failure categories raised by the library. The CLI maps every one of them
/// to exit code 2 (invalid input or violated hypothesis).
enum class errc {
  invalid_point,    ///< point off the model quadric
  invalid_input,    ///< malformed argument (negative length, bad size, ...)
  mismatched_base,  ///< tangent vectors at different base points
  domain,           ///< argument outside the domain of a closed-form formula
  hypothesis,       ///< c + lambda^2 <= 0 and similar theorem hypotheses
  not_closed,       ///< support density with a nonzero first harmonic
  not_convex,
  cusp,             ///< turning angle too close to +-pi
  degenerate,       ///< zero-length edge, degenerate face, ...
  hemisphere,       ///< curve not inside an open hemisphere
  non_monotone,     ///< swerve profile decreasing somewhere
  convergence,      ///< iterative generator failed
  schema,           ///< file format violation
};

inline std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_point: return "invalid-point";
    case errc::invalid_input: return "invalid-input";
    case errc::mismatched_base: return "mismatched-base";
    case errc::domain: return "domain";
    case errc::hypothesis: return "hypothesis";
    case errc::not_closed: return "not-closed";
    case errc::not_convex: return "not-convex";
    case errc::cusp: return "cusp";
    case errc::degenerate: return "degenerate";
    case errc::hemisphere: return "hemisphere";
    case errc::non_monotone: return "non-monotone";
    case errc::convergence: return "convergence";
    case errc::schema: return "schema";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace curvebound
