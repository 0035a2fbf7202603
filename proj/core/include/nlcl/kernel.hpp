#pragma once

#include <limits>
#include <vector>

#include "nlcl/errors.hpp"

namespace nlcl {

enum class KernelFamily { exponential, constant, tabulated };

/// One-sided averaging weight gamma scaled by the nonlocal reach eta.
///
/// The shape gamma lives on [0, inf) in the unscaled variable; every
/// integral below refers to the scaled weight eta^-1 gamma(s / eta).
/// gamma is nonnegative and monotonically non-increasing. Construction
/// normalizes the shape to unit mass; a tabulated shape whose raw
/// integral differs from one is rescaled and flagged.
class KernelSpec {
public:
    static KernelSpec exponential(double eta);
    static KernelSpec constant(double eta);
    /// Piecewise-linear shape through (knots, values); knots ascend from 0
    /// and the shape vanishes beyond the last knot.
    static KernelSpec tabulated(double eta, std::vector<double> knots,
                                std::vector<double> values, bool normalize = true);

    KernelFamily family() const { return family_; }
    double eta() const { return eta_; }
    bool normalized() const { return normalized_; }
    bool was_rescaled() const { return rescaled_; }

    /// Integral of the scaled weight over [a, b], 0 <= a <= b (b may be
    /// infinite). Closed form for exponential/constant, exact piecewise
    /// integration for tabulated shapes.
    double cell_mass(double a, double b) const;

    /// Integral of the scaled weight over [a, inf).
    double tail_mass(double a) const;

    /// First moment of the unscaled shape, integral of s * gamma(s).
    double first_moment() const;

    /// End of the unscaled support (infinite for the exponential family).
    double support() const { return support_; }

private:
    KernelSpec() = default;

    double shape_integral(double a, double b) const;  // unscaled variable

    KernelFamily family_ = KernelFamily::exponential;
    double eta_ = 1.0;
    std::vector<double> knots_;
    std::vector<double> values_;
    double support_ = std::numeric_limits<double>::infinity();
    bool normalized_ = true;
    bool rescaled_ = false;
};

/// Free-function spelling of KernelSpec::cell_mass with precondition checks.
double kernel_cell_mass(const KernelSpec& k, double a, double b);

/// Free-function spelling of KernelSpec::first_moment.
double kernel_first_moment(const KernelSpec& k);

}  // namespace nlcl
