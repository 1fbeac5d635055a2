#pragma once

#include <stdexcept>
#include <string>

namespace magdyn {

/// Integration state exceeded the overflow guard (runaway instability).
struct NonFiniteState : std::runtime_error {
    double t_abort;
    explicit NonFiniteState(double t, const std::string& what)
        : std::runtime_error(what), t_abort(t) {}
};

struct IntervalOutsidePulse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// fuzzy_centre called with |beta| below 1e-12.
struct ZeroField : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// theta(t)=0 at a point where |theta'(t)| != 2.
struct SingularTheta : std::runtime_error {
    double t_singular;
    explicit SingularTheta(double t, const std::string& what)
        : std::runtime_error(what), t_singular(t) {}
};

struct ZeroB : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Kept for tabulated generalisations of the design system; the analytic
/// 4x4 constraint matrix has a fixed nonzero determinant.
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyResult : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotOnThreshold : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientSmoothness : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace magdyn
