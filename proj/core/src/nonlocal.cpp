#include "nlcl/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace nlcl {

namespace {

constexpr double kMassCutoff = 1e-18;  // kernel mass below which cells are dropped

void require_exponential(const KernelSpec& kernel, const char* where) {
    if (kernel.family() != KernelFamily::exponential) {
        throw WrongKernelFamily(std::string(where) + ": exponential kernel required");
    }
}

std::vector<double> transform(std::span<const double> q, const VelocityModel& v) {
    std::vector<double> u(q.size());
    for (size_t j = 0; j < q.size(); ++j) u[j] = v(q[j]);
    return u;
}

}  // namespace

std::vector<double> downstream_average(std::span<const double> u, double u_right,
                                       const KernelSpec& kernel, const GridSpec& grid) {
    if (!kernel.normalized()) {
        throw KernelNotNormalized("downstream_average: kernel mass is not one");
    }
    const int n = grid.n_cells();
    const double dx = grid.dx();

    // per-cell weights, identical for every interface on a uniform grid
    std::vector<double> w;
    w.reserve(64);
    for (int m = 0; m < n; ++m) {
        w.push_back(kernel.cell_mass(m * dx, (m + 1) * dx));
        if (kernel.tail_mass((m + 1) * dx) <= kMassCutoff) break;
    }
    const int m_reach = static_cast<int>(w.size());

    std::vector<double> out(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const int j_end = std::min(n, k + m_reach);
        double sum = 0.0, comp = 0.0;
        for (int j = k; j < j_end; ++j) {
            const double term = u[static_cast<size_t>(j)] * w[static_cast<size_t>(j - k)];
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        if (k + m_reach >= n) {
            sum += u_right * kernel.tail_mass((n - k) * dx);
        }
        out[static_cast<size_t>(k)] = sum;
    }
    return out;
}

std::vector<double> downstream_average_scan(std::span<const double> u, double u_right,
                                            const KernelSpec& kernel, const GridSpec& grid) {
    require_exponential(kernel, "downstream_average_scan");
    const int n = grid.n_cells();
    const double r = std::exp(-grid.dx() / kernel.eta());
    std::vector<double> out(static_cast<size_t>(n) + 1);
    out[static_cast<size_t>(n)] = u_right;  // pure-extension tail
    // u + r (A - u) rather than r A + (1 - r) u keeps constant states
    // exact fixed points of the recursion
    for (int k = n - 1; k >= 0; --k) {
        const double uk = u[static_cast<size_t>(k)];
        out[static_cast<size_t>(k)] = uk + r * (out[static_cast<size_t>(k) + 1] - uk);
    }
    return out;
}

InterfaceField nonlocal_velocity(const CellField& q, const KernelSpec& kernel,
                                 const VelocityModel& v) {
    const auto u = transform(q.values(), v);
    return InterfaceField(q.grid(),
                          downstream_average(u, v(q.extension().right), kernel, q.grid()));
}

InterfaceField nonlocal_velocity_exponential_scan(const CellField& q, const KernelSpec& kernel,
                                                  const VelocityModel& v) {
    const auto u = transform(q.values(), v);
    return InterfaceField(q.grid(),
                          downstream_average_scan(u, v(q.extension().right), kernel, q.grid()));
}

InterfaceField nonlocal_solution_velocity(const CellField& q, const KernelSpec& kernel,
                                          const VelocityModel& v) {
    auto avg = downstream_average(q.values(), q.extension().right, kernel, q.grid());
    for (double& a : avg) a = v(a);
    return InterfaceField(q.grid(), std::move(avg));
}

InterfaceField nonlocal_solution_velocity_exponential_scan(const CellField& q,
                                                           const KernelSpec& kernel,
                                                           const VelocityModel& v) {
    auto avg = downstream_average_scan(q.values(), q.extension().right, kernel, q.grid());
    for (double& a : avg) a = v(a);
    return InterfaceField(q.grid(), std::move(avg));
}

double derivative_identity_residual(const CellField& q, const KernelSpec& kernel,
                                    const VelocityModel& v) {
    require_exponential(kernel, "derivative_identity_residual");
    const InterfaceField w = nonlocal_velocity_exponential_scan(q, kernel, v);
    const double dx = q.grid().dx();
    const double eta = kernel.eta();
    // difference quotient across cell k versus the identity evaluated at
    // the downwind interface with the upwind cell state
    double worst = 0.0;
    for (int k = 0; k < q.grid().n_cells(); ++k) {
        const double lhs = eta * (w[k + 1] - w[k]) / dx;
        const double rhs = w[k + 1] - v(q[k]);
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

}  // namespace nlcl
