#pragma once

#include <vector>

#include "nlcl/initial_data.hpp"
#include "nlcl/solver.hpp"
#include "nlcl/velocity.hpp"

namespace nlcl {

/// Flux f(q) = q V(q) of the local conservation law, with derivatives.
class FluxModel {
public:
    explicit FluxModel(VelocityModel v) : v_(std::move(v)) {}

    double f(double q) const { return q * v_(q); }
    double fprime(double q) const { return v_(q) + q * v_.deriv(q); }
    double fsecond(double q) const { return 2.0 * v_.deriv(q) + q * v_.deriv2(q); }
    const VelocityModel& velocity() const { return v_; }

private:
    VelocityModel v_;
};

/// Roots of f' inside (lo, hi), located by sign scanning plus bisection
/// to 1e-12. At most one root exists when f'' keeps one sign.
std::vector<double> flux_critical_points(const FluxModel& fm, double lo, double hi);

/// Scalar Godunov flux: min of f over [a, b] when a <= b, max over
/// [b, a] otherwise. Extrema are located via the critical points of f'
/// plus the endpoints.
double godunov_flux(const FluxModel& fm, double a, double b);

enum class WaveType { constant, shock, rarefaction };

/// Self-similar solution of the Riemann problem for a genuinely
/// nonlinear flux; q_l is the state for x < x0.
class RiemannSolution {
public:
    RiemannSolution(FluxModel fm, double q_l, double q_r, WaveType structure, double shock_speed,
                    double fan_lo, double fan_hi);

    WaveType structure() const { return structure_; }
    double shock_speed() const { return shock_speed_; }
    double fan_lo() const { return fan_lo_; }
    double fan_hi() const { return fan_hi_; }
    double q_l() const { return q_l_; }
    double q_r() const { return q_r_; }

    /// Density at similarity coordinate xi = x / t.
    double sample(double xi) const;

private:
    FluxModel fm_;
    double q_l_, q_r_;
    WaveType structure_;
    double shock_speed_;
    double fan_lo_, fan_hi_;
};

/// Solve the Riemann problem exactly. Throws FluxNotGenuinelyNonlinear
/// when f'' changes sign between the two states.
RiemannSolution exact_riemann(const FluxModel& fm, double q_l, double q_r);

/// Godunov finite-volume run of the local law; the eta -> 0 reference.
Trajectory godunov_simulate(const FluxModel& fm, const InitialDatum& datum, const GridSpec& grid,
                            double cfl, double t_end, std::vector<double> snapshot_times);

}  // namespace nlcl
