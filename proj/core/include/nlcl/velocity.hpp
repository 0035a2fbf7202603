#pragma once

#include <string>
#include <vector>

namespace nlcl {

/// Polynomial velocity law V with exact derivatives.
///
/// Every catalog family is polynomial: linear 1 - s, quadratic 1 - s^2,
/// Greenshields V_max (1 - (s/q_max)^k), and free-coefficient custom
/// polynomials. Construction checks V' <= 0 and V >= 0 on [0, q_max].
class VelocityModel {
public:
    static VelocityModel linear();
    static VelocityModel quadratic();
    static VelocityModel greenshields(int k, double v_max, double q_max);
    /// coefficients[i] multiplies s^i.
    static VelocityModel polynomial(std::vector<double> coefficients,
                                    std::string name = "polynomial", double q_max = 1.0);

    double operator()(double s) const;
    double deriv(double s) const;
    double deriv2(double s) const;

    double q_max() const { return q_max_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& coefficients() const { return coef_; }

private:
    VelocityModel(std::vector<double> coef, std::string name, double q_max);

    std::vector<double> coef_;
    std::string name_;
    double q_max_;
};

/// Verdicts for the hypotheses placed on the velocity over a state
/// interval [q_lo, q_hi], decided by dense sampling plus endpoints.
struct ConditionReport {
    double q_lo = 0.0;
    double q_hi = 0.0;
    int samples = 0;

    /// V'(x) x - V(x) + V(q_lo) <= 0 on the interval.
    bool tv_bound = false;
    double tv_bound_worst = 0.0;  // max of the left-hand side

    /// -inf < V'(s)/s < 0 on the interval.
    bool v_prime_bounds = false;

    /// s V(s) strictly convex or strictly concave on the interval.
    bool flux_strict_convexity = false;
    int flux_convexity_sign = 0;  // +1 convex, -1 concave, 0 neither

    /// |2 V'(s) + s V''(s)| >= c > 0 with the attained c.
    bool oleinik_uniform = false;
    double oleinik_constant = 0.0;
};

ConditionReport check_velocity_conditions(const VelocityModel& v, double q_lo, double q_hi,
                                          int samples = 10000);

}  // namespace nlcl
