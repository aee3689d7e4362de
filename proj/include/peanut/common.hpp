#ifndef PEANUT_COMMON_HPP
#define PEANUT_COMMON_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace peanut {

// Denominator of a Glaisher quotient vanished (or the requested point sits on
// a pole of the coordinate map / special function).
class PoleError : public std::domain_error {
public:
  explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

// An iteration failed to converge (shooting, Newton, quadrature refinement,
// series summation).
class ConvergenceError : public std::runtime_error {
public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

namespace diag {

// Non-fatal accuracy warnings (clamped modulus, Q near its logarithmic spike,
// unresolved series tails).  Collected per thread; the CLI drains them to
// stderr, tests inspect them directly.
void warn(std::string message);
std::vector<std::string> drain_warnings();
bool has_warnings();

}  // namespace diag

}  // namespace peanut

#endif
