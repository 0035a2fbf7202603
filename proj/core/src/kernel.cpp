#include "nlcl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlcl {

namespace {

constexpr double kNormTol = 1e-12;

double lerp_value(const std::vector<double>& knots, const std::vector<double>& values, double s) {
    if (s <= knots.front()) return values.front();
    if (s >= knots.back()) return 0.0;
    auto it = std::upper_bound(knots.begin(), knots.end(), s);
    const size_t i = static_cast<size_t>(it - knots.begin()) - 1;
    const double t = (s - knots[i]) / (knots[i + 1] - knots[i]);
    return values[i] + t * (values[i + 1] - values[i]);
}

}  // namespace

KernelSpec KernelSpec::exponential(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("KernelSpec: eta must be positive");
    KernelSpec k;
    k.family_ = KernelFamily::exponential;
    k.eta_ = eta;
    k.support_ = std::numeric_limits<double>::infinity();
    return k;
}

KernelSpec KernelSpec::constant(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("KernelSpec: eta must be positive");
    KernelSpec k;
    k.family_ = KernelFamily::constant;
    k.eta_ = eta;
    k.support_ = 1.0;
    return k;
}

KernelSpec KernelSpec::tabulated(double eta, std::vector<double> knots,
                                 std::vector<double> values, bool normalize) {
    if (!(eta > 0.0)) throw std::invalid_argument("KernelSpec: eta must be positive");
    if (knots.size() != values.size() || knots.size() < 2) {
        throw std::invalid_argument("KernelSpec: need matching knots/values, at least two");
    }
    if (knots.front() != 0.0) {
        throw std::invalid_argument("KernelSpec: first knot must be 0");
    }
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i] < knots[i + 1])) {
            throw std::invalid_argument("KernelSpec: knots must ascend");
        }
        if (values[i + 1] > values[i] + 1e-14) {
            throw std::invalid_argument("KernelSpec: shape must be non-increasing");
        }
    }
    for (double v : values) {
        if (!(v >= 0.0)) throw std::invalid_argument("KernelSpec: shape must be nonnegative");
    }

    KernelSpec k;
    k.family_ = KernelFamily::tabulated;
    k.eta_ = eta;
    k.knots_ = std::move(knots);
    k.values_ = std::move(values);
    k.support_ = k.knots_.back();

    double mass = 0.0;
    for (size_t i = 0; i + 1 < k.knots_.size(); ++i) {
        mass += 0.5 * (k.values_[i] + k.values_[i + 1]) * (k.knots_[i + 1] - k.knots_[i]);
    }
    if (normalize) {
        if (!(mass > 0.0)) throw std::invalid_argument("KernelSpec: shape has zero mass");
        if (std::fabs(mass - 1.0) > kNormTol) {
            for (double& v : k.values_) v /= mass;
            k.rescaled_ = true;
        }
        k.normalized_ = true;
    } else {
        k.normalized_ = std::fabs(mass - 1.0) <= kNormTol;
    }
    return k;
}

double KernelSpec::shape_integral(double a, double b) const {
    // Exact integral of the piecewise-linear shape over [a, b], unscaled.
    a = std::max(a, 0.0);
    b = std::min(b, support_);
    if (b <= a) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i + 1 < knots_.size(); ++i) {
        const double lo = std::max(a, knots_[i]);
        const double hi = std::min(b, knots_[i + 1]);
        if (hi <= lo) continue;
        sum += 0.5 * (lerp_value(knots_, values_, lo) + lerp_value(knots_, values_, hi)) * (hi - lo);
    }
    return sum;
}

double KernelSpec::cell_mass(double a, double b) const {
    switch (family_) {
        case KernelFamily::exponential: {
            if (std::isinf(b)) return std::exp(-a / eta_);
            // exp(-a/eta) - exp(-b/eta) without cancellation for b near a
            return std::exp(-a / eta_) * (-std::expm1(-(b - a) / eta_));
        }
        case KernelFamily::constant: {
            const double lo = std::min(a / eta_, 1.0);
            const double hi = std::min(std::isinf(b) ? 1.0 : b / eta_, 1.0);
            return std::max(hi - lo, 0.0);
        }
        case KernelFamily::tabulated:
            return shape_integral(a / eta_, std::isinf(b) ? support_ : b / eta_);
    }
    return 0.0;
}

double KernelSpec::tail_mass(double a) const {
    return cell_mass(a, std::numeric_limits<double>::infinity());
}

double KernelSpec::first_moment() const {
    switch (family_) {
        case KernelFamily::exponential:
            return 1.0;
        case KernelFamily::constant:
            return 0.5;
        case KernelFamily::tabulated: {
            // integral of s * (linear piece) has a closed form per piece
            double sum = 0.0;
            for (size_t i = 0; i + 1 < knots_.size(); ++i) {
                const double x0 = knots_[i], x1 = knots_[i + 1];
                const double y0 = values_[i], y1 = values_[i + 1];
                const double m = (y1 - y0) / (x1 - x0);
                const double c = y0 - m * x0;
                sum += c * (x1 * x1 - x0 * x0) / 2.0 + m * (x1 * x1 * x1 - x0 * x0 * x0) / 3.0;
            }
            return sum;
        }
    }
    return 0.0;
}

double kernel_cell_mass(const KernelSpec& k, double a, double b) {
    if (!(a >= 0.0) || a > b) {
        throw InvalidInterval("kernel_cell_mass: need 0 <= a <= b");
    }
    return k.cell_mass(a, b);
}

double kernel_first_moment(const KernelSpec& k) {
    return k.first_moment();
}

}  // namespace nlcl
