#pragma once

#include <span>

#include "nlcl/grid.hpp"
#include "nlcl/kernel.hpp"
#include "nlcl/velocity.hpp"

namespace nlcl {

/// Downstream kernel average of per-cell samples, evaluated at every
/// interface: A_k = sum_{j >= k} u_j * m_k(cell j) + u_right * (mass
/// beyond the domain). Exact for piecewise-constant u with constant
/// right extension; weights are exact per-cell kernel masses.
std::vector<double> downstream_average(std::span<const double> u, double u_right,
                                       const KernelSpec& kernel, const GridSpec& grid);

/// Same average computed by the right-to-left O(N) recursion
/// A_k = r A_{k+1} + (1 - r) u_k with r = exp(-dx/eta), which is the
/// exact per-cell integral of the exponential weight. Requires an
/// exponential kernel.
std::vector<double> downstream_average_scan(std::span<const double> u, double u_right,
                                            const KernelSpec& kernel, const GridSpec& grid);

/// Nonlocal velocity W[V(q)] at cell interfaces (general path).
InterfaceField nonlocal_velocity(const CellField& q, const KernelSpec& kernel,
                                 const VelocityModel& v);

/// Nonlocal velocity via the exponential-kernel linear scan; identical to
/// nonlocal_velocity to within 1e-13 absolute.
InterfaceField nonlocal_velocity_exponential_scan(const CellField& q, const KernelSpec& kernel,
                                                  const VelocityModel& v);

/// Velocity of the nonlocal-in-solution model: V applied pointwise to the
/// downstream average of q itself.
InterfaceField nonlocal_solution_velocity(const CellField& q, const KernelSpec& kernel,
                                          const VelocityModel& v);

/// Scan variant of nonlocal_solution_velocity (exponential kernels only).
InterfaceField nonlocal_solution_velocity_exponential_scan(const CellField& q,
                                                           const KernelSpec& kernel,
                                                           const VelocityModel& v);

/// Worst-case defect of the discrete form of the identity
/// eta dW/dx = W - V(q) over the grid, first order in dx for smooth q.
/// Requires an exponential kernel.
double derivative_identity_residual(const CellField& q, const KernelSpec& kernel,
                                    const VelocityModel& v);

}  // namespace nlcl
