#include "nlcl/velocity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlcl/errors.hpp"

namespace nlcl {

namespace {

double eval_poly(const std::vector<double>& c, double s) {
    double r = 0.0;
    for (size_t i = c.size(); i-- > 0;) r = r * s + c[i];
    return r;
}

std::vector<double> differentiate(const std::vector<double>& c) {
    std::vector<double> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
    if (d.empty()) d.push_back(0.0);
    return d;
}

}  // namespace

VelocityModel::VelocityModel(std::vector<double> coef, std::string name, double q_max)
    : coef_(std::move(coef)), name_(std::move(name)), q_max_(q_max) {
    if (coef_.empty()) throw std::invalid_argument("VelocityModel: empty coefficients");
    if (!(q_max_ > 0.0)) throw std::invalid_argument("VelocityModel: q_max must be positive");
    const int probes = 1000;
    const auto d = differentiate(coef_);
    for (int i = 0; i <= probes; ++i) {
        const double s = q_max_ * i / probes;
        if (eval_poly(d, s) > 1e-12) {
            throw std::invalid_argument("VelocityModel '" + name_ +
                                        "': V' must be nonpositive on [0, q_max]");
        }
        if (eval_poly(coef_, s) < -1e-12) {
            throw std::invalid_argument("VelocityModel '" + name_ +
                                        "': V must be nonnegative on [0, q_max]");
        }
    }
}

VelocityModel VelocityModel::linear() {
    return VelocityModel({1.0, -1.0}, "linear", 1.0);
}

VelocityModel VelocityModel::quadratic() {
    return VelocityModel({1.0, 0.0, -1.0}, "quadratic", 1.0);
}

VelocityModel VelocityModel::greenshields(int k, double v_max, double q_max) {
    if (k < 1) throw std::invalid_argument("VelocityModel: greenshields exponent must be >= 1");
    if (!(v_max > 0.0) || !(q_max > 0.0)) {
        throw std::invalid_argument("VelocityModel: greenshields constants must be positive");
    }
    std::vector<double> c(static_cast<size_t>(k) + 1, 0.0);
    c[0] = v_max;
    c[static_cast<size_t>(k)] = -v_max / std::pow(q_max, k);
    return VelocityModel(std::move(c), "greenshields_k" + std::to_string(k), q_max);
}

VelocityModel VelocityModel::polynomial(std::vector<double> coefficients, std::string name,
                                        double q_max) {
    return VelocityModel(std::move(coefficients), std::move(name), q_max);
}

double VelocityModel::operator()(double s) const {
    return eval_poly(coef_, s);
}

double VelocityModel::deriv(double s) const {
    return eval_poly(differentiate(coef_), s);
}

double VelocityModel::deriv2(double s) const {
    return eval_poly(differentiate(differentiate(coef_)), s);
}

ConditionReport check_velocity_conditions(const VelocityModel& v, double q_lo, double q_hi,
                                          int samples) {
    if (!(q_lo >= 0.0) || q_lo > q_hi) {
        throw InvalidInterval("check_velocity_conditions: need 0 <= q_lo <= q_hi");
    }
    if (samples < 2) samples = 2;

    ConditionReport rep;
    rep.q_lo = q_lo;
    rep.q_hi = q_hi;
    rep.samples = samples;

    const double tol = 1e-12;
    const double v_at_lo = v(q_lo);

    double tv_worst = -std::numeric_limits<double>::infinity();
    bool ratio_negative = true;
    bool ratio_finite = true;
    int n_fsec_pos = 0, n_fsec_neg = 0, n_fsec_zero = 0;
    double min_abs_fsec = std::numeric_limits<double>::infinity();

    for (int i = 0; i <= samples; ++i) {
        const double s = q_lo + (q_hi - q_lo) * i / samples;

        tv_worst = std::max(tv_worst, v.deriv(s) * s - v(s) + v_at_lo);

        // V'(s)/s, continued by V''(0) where V'(0) = 0
        double ratio;
        if (s > tol) {
            ratio = v.deriv(s) / s;
        } else if (std::fabs(v.deriv(0.0)) <= tol) {
            ratio = v.deriv2(0.0);
        } else {
            ratio_finite = false;
            ratio = -std::numeric_limits<double>::infinity();
        }
        if (!(ratio < -tol)) ratio_negative = false;

        const double fsec = 2.0 * v.deriv(s) + s * v.deriv2(s);
        if (fsec > tol) {
            ++n_fsec_pos;
        } else if (fsec < -tol) {
            ++n_fsec_neg;
        } else {
            ++n_fsec_zero;
        }
        min_abs_fsec = std::min(min_abs_fsec, std::fabs(fsec));
    }

    rep.tv_bound_worst = tv_worst;
    rep.tv_bound = tv_worst <= tol;
    rep.v_prime_bounds = ratio_finite && ratio_negative;

    // Strict convexity/concavity tolerates isolated zeros of the second
    // derivative (e.g. s - s^3 at s = 0) but not sign changes.
    const int zero_allowance = std::max(2, samples / 1000);
    if (n_fsec_pos == 0 && n_fsec_neg > 0 && n_fsec_zero <= zero_allowance) {
        rep.flux_strict_convexity = true;
        rep.flux_convexity_sign = -1;
    } else if (n_fsec_neg == 0 && n_fsec_pos > 0 && n_fsec_zero <= zero_allowance) {
        rep.flux_strict_convexity = true;
        rep.flux_convexity_sign = +1;
    }

    rep.oleinik_constant = min_abs_fsec;
    rep.oleinik_uniform = rep.flux_strict_convexity && min_abs_fsec > tol;
    return rep;
}

}  // namespace nlcl
