#ifndef RFORGE_ERRORS_HPP
#define RFORGE_ERRORS_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace rforge {

using Point = std::array<double, 4>;  // (t, x, y, z)

// Bad invocation or configuration: unknown model, malformed grid spec,
// grid touching a singular margin, start point on a horizon. CLI exit 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical precondition failed at a concrete event: division by a
// zero-valued jet, |N|^{1/2} at N = 0, violated model assumption. Carries
// the offending point when the thrower knows it; low-level jet ops do not,
// so evaluators attach it on the way out (see with_point).
struct DomainError : std::runtime_error {
    std::optional<Point> where;

    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
    DomainError(const std::string& msg, const Point& p)
        : std::runtime_error(msg + at_suffix(p)), where(p) {}

    static std::string at_suffix(const Point& p) {
        return " at (t,x,y,z)=(" + std::to_string(p[0]) + ", " + std::to_string(p[1]) +
               ", " + std::to_string(p[2]) + ", " + std::to_string(p[3]) + ")";
    }
};

// Metric not invertible to working precision at the event.
struct DegenerateEventError : DomainError {
    double det;

    DegenerateEventError(double det_value, const Point& p)
        : DomainError("degenerate event: |det g| = " + std::to_string(det_value) +
                          " below the invertibility floor",
                      p),
          det(det_value) {}
};

// Re-throws a DomainError with the event attached if it lacks one.
template <class Fn>
auto with_point(const Point& p, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DegenerateEventError&) {
        throw;
    } catch (const DomainError& e) {
        if (e.where) throw;
        throw DomainError(e.what(), p);
    }
}

}  // namespace rforge

#endif
