#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlcl/solver.hpp"
#include "nlcl/velocity.hpp"

namespace nlcl {

enum class EntropyKind { tailored, kruzkov_smoothed, custom };

struct EntropyBuildOptions {
    int nodes = 2049;
    /// kruzkov_smoothed: smoothed |s - center| with this transition width.
    double kruzkov_center = 0.5;
    double kruzkov_width = 0.05;
    /// custom: alpha'' as a callable (must be nonnegative on the interval).
    std::function<double(double)> custom_second;
};

/// Convex entropy alpha with flux companion beta, beta' = alpha' (V + s V'),
/// tabulated on [q_lo, q_hi] with cubic Hermite interpolation between
/// nodes. Anchored so alpha(q_lo) = alpha'(q_lo) = 0, likewise beta.
class EntropyPair {
public:
    EntropyPair(std::vector<double> nodes, std::vector<double> alpha,
                std::vector<double> alpha_prime, std::vector<double> beta,
                std::vector<double> beta_prime, EntropyKind kind);

    double alpha(double s) const;
    double alpha_prime(double s) const;
    double beta(double s) const;
    double beta_prime(double s) const;

    double q_lo() const { return nodes_.front(); }
    double q_hi() const { return nodes_.back(); }
    EntropyKind kind() const { return kind_; }

    const std::vector<double>& node_points() const { return nodes_; }
    const std::vector<double>& node_alpha() const { return alpha_; }
    const std::vector<double>& node_alpha_prime() const { return alpha_prime_; }
    const std::vector<double>& node_beta() const { return beta_; }
    const std::vector<double>& node_beta_prime() const { return beta_prime_; }

    /// Spread of the tabulated values, used by the residual error budget.
    double alpha_range() const;
    double beta_range() const;

private:
    double hermite(const std::vector<double>& val, const std::vector<double>& der,
                   double s) const;

    std::vector<double> nodes_;
    std::vector<double> alpha_, alpha_prime_, beta_, beta_prime_;
    EntropyKind kind_;
};

/// Build the pair by twice integrating alpha'' from q_lo. The tailored
/// kind uses alpha''(s) = -V'(s)/s and refuses q_lo = 0 when V'(0) != 0.
EntropyPair build_entropy_pair(const VelocityModel& v, double q_lo, double q_hi, EntropyKind kind,
                               EntropyBuildOptions opts = {});

/// C1 cosine bump: (1 + cos(pi u)) / 2 on |u| <= 1, zero outside.
double cosine_bump(double u);

/// Tensor-product space-time bump test function.
struct BumpTestFunction {
    double t_center = 0.0;
    double x_center = 0.0;
    double r_t = 0.1;
    double r_x = 0.1;

    double value(double t, double x) const;
    double t_lo() const { return t_center - r_t; }
    double t_hi() const { return t_center + r_t; }
    double x_lo() const { return x_center - r_x; }
    double x_hi() const { return x_center + r_x; }
};

struct TestFunctionFamily {
    int t_count = 5;
    int x_count = 9;
    std::vector<double> widths = {0.1, 0.2, 0.4};

    /// Lattice over the trajectory's recorded window; spatial supports lie
    /// inside the domain and time supports end before the last snapshot.
    std::vector<BumpTestFunction> generate(const Trajectory& traj) const;
};

/// Discrete entropy functional for one test function: exact space-time
/// integration of the phi derivatives against the snapshot-slab,
/// cell-constant representation of q, plus the initial-datum term.
/// Vanishes identically on constant trajectories.
double entropy_functional(const Trajectory& traj, const EntropyPair& pair,
                          const BumpTestFunction& phi);

/// Same functional for an arbitrary test function with the given support
/// box; the quadrature is linear in phi.
double entropy_functional(const Trajectory& traj, const EntropyPair& pair,
                          const std::function<double(double, double)>& phi, Interval t_support,
                          Interval x_support);

/// Discretization-error allowance for residual verdicts:
/// 10 (dx + max snapshot gap) (pi/2) (range(alpha) + range(beta)).
double entropy_error_budget(const Trajectory& traj, const EntropyPair& pair);

struct EntropyResidualResult {
    double worst = 0.0;
    int worst_index = -1;
    BumpTestFunction worst_phi;
    std::vector<double> per_phi;
};

/// Minimum of the entropy functional over the family; negative values
/// beyond the error budget witness an entropy violation.
EntropyResidualResult entropy_residual(const Trajectory& traj, const EntropyPair& pair,
                                       const TestFunctionFamily& family);

}  // namespace nlcl
