#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlcl/local.hpp"
#include "test_helpers.hpp"

using namespace nlcl;

namespace {

// brute-force extremum of f over [lo, hi]
double brute_extremum(const FluxModel& fm, double lo, double hi, bool minimum,
                      int samples = 1'000'000) {
    double best = fm.f(lo);
    for (int i = 1; i <= samples; ++i) {
        const double s = lo + (hi - lo) * i / samples;
        const double fs = fm.f(s);
        if (minimum ? fs < best : fs > best) best = fs;
    }
    return best;
}

double rarefaction_l1(const FluxModel& fm, double ql, double qr, int n) {
    GridSpec g(-2.0, 2.0, n);
    const auto traj =
        godunov_simulate(fm, InitialDatum::riemann(ql, qr, 0.0), g, 0.5, 0.5, {0.0, 0.5});
    const auto rs = exact_riemann(fm, ql, qr);
    const auto& q = traj.snapshots().back().q;
    double err = 0.0;
    for (int j = 0; j < q.size(); ++j) {
        err += std::fabs(q[j] - rs.sample(g.center(j) / 0.5)) * g.dx();
    }
    return err;
}

}  // namespace

TEST_CASE("godunov flux agrees with the flux on equal states") {
    FluxModel fm(VelocityModel::quadratic());  // f = q - q^3
    CHECK(godunov_flux(fm, 0.5, 0.5) == doctest::Approx(0.375).epsilon(1e-15));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const double a = uni(rng);
        CHECK(godunov_flux(fm, a, a) == doctest::Approx(fm.f(a)).epsilon(1e-14));
    }
}

TEST_CASE("godunov flux finds interior extrema") {
    FluxModel fm(VelocityModel::quadratic());
    // decreasing data straddle the critical point 1/sqrt(3)
    const double f_max = godunov_flux(fm, 0.75, 0.25);
    CHECK(f_max == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-12));
    CHECK(f_max == doctest::Approx(brute_extremum(fm, 0.25, 0.75, false)).epsilon(1e-10));

    // increasing data take the endpoint minimum
    const double f_min = godunov_flux(fm, 0.25, 0.75);
    CHECK(f_min == doctest::Approx(0.234375).epsilon(1e-14));
    CHECK(f_min == doctest::Approx(brute_extremum(fm, 0.25, 0.75, true)).epsilon(1e-10));
}

TEST_CASE("godunov flux is monotone in both arguments") {
    FluxModel fm(VelocityModel::quadratic());
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double a = uni(rng), b = uni(rng);
        const double base = godunov_flux(fm, a, b);
        const double da = std::min(1.0 - a, 0.05);
        const double db = std::min(1.0 - b, 0.05);
        CHECK(godunov_flux(fm, a + da, b) >= base - 1e-12);
        CHECK(godunov_flux(fm, a, b + db) <= base + 1e-12);
    }
}

TEST_CASE("exact riemann solutions") {
    FluxModel fm(VelocityModel::quadratic());

    SUBCASE("equal states stay constant") {
        const auto rs = exact_riemann(fm, 0.4, 0.4);
        CHECK(rs.structure() == WaveType::constant);
        CHECK(rs.sample(-1.0) == 0.4);
        CHECK(rs.sample(1.0) == 0.4);
    }

    SUBCASE("increasing jump is an admissible shock") {
        const auto rs = exact_riemann(fm, 0.25, 0.75);
        REQUIRE(rs.structure() == WaveType::shock);
        CHECK(rs.shock_speed() == doctest::Approx(0.1875).epsilon(1e-14));
        // Rankine-Hugoniot residual
        const double rh = (fm.f(0.75) - fm.f(0.25)) - rs.shock_speed() * 0.5;
        CHECK(std::fabs(rh) <= 1e-14);
        // Lax admissibility
        CHECK(fm.fprime(0.25) >= rs.shock_speed());
        CHECK(rs.shock_speed() >= fm.fprime(0.75));
        CHECK(rs.sample(0.18) == 0.25);
        CHECK(rs.sample(0.19) == 0.75);
    }

    SUBCASE("decreasing jump opens a rarefaction fan") {
        const auto rs = exact_riemann(fm, 0.75, 0.25);
        REQUIRE(rs.structure() == WaveType::rarefaction);
        CHECK(rs.fan_lo() == doctest::Approx(-0.6875).epsilon(1e-14));
        CHECK(rs.fan_hi() == doctest::Approx(0.8125).epsilon(1e-14));
        CHECK(rs.sample(0.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
        CHECK(rs.sample(-1.0) == 0.75);
        CHECK(rs.sample(1.0) == 0.25);
        // sampler is continuous and monotone across the fan
        double prev = rs.sample(rs.fan_lo());
        for (int i = 1; i <= 100; ++i) {
            const double xi = rs.fan_lo() + (rs.fan_hi() - rs.fan_lo()) * i / 100;
            const double cur = rs.sample(xi);
            CHECK(cur <= prev + 1e-12);
            CHECK(std::fabs(cur - prev) <= 0.02);
            prev = cur;
        }
    }

    SUBCASE("sign-changing flux curvature is rejected") {
        FluxModel convex(VelocityModel::polynomial({1.0, -2.0, 1.0}, "convex"));
        CHECK_THROWS_AS(exact_riemann(convex, 0.25, 0.75), FluxNotGenuinelyNonlinear);
    }
}

TEST_CASE("godunov run holds constant states") {
    FluxModel fm(VelocityModel::quadratic());
    GridSpec g(-1.0, 1.0, 100);
    const auto traj = godunov_simulate(fm, InitialDatum::riemann(0.3, 0.3, 0.0), g, 0.5, 0.4,
                                       {0.0, 0.4});
    const auto& q = traj.snapshots().back().q;
    for (int j = 0; j < q.size(); ++j) CHECK(q[j] == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("shock tracks the rankine-hugoniot speed") {
    FluxModel fm(VelocityModel::quadratic());
    GridSpec g(-2.0, 2.0, 2000);
    const auto traj = godunov_simulate(fm, InitialDatum::riemann(0.25, 0.75, -0.5), g, 0.5, 0.5,
                                       {0.0, 0.5});
    const auto& q = traj.snapshots().back().q;
    double crossing = -10.0;
    for (int j = 0; j + 1 < q.size(); ++j) {
        if ((q[j] - 0.5) * (q[j + 1] - 0.5) <= 0.0 && q[j] != q[j + 1]) {
            crossing = g.center(j) + (0.5 - q[j]) / (q[j + 1] - q[j]) * g.dx();
            break;
        }
    }
    CHECK(std::fabs(crossing - (-0.5 + 0.09375)) <= 2.0 * g.dx());
}

TEST_CASE("riemann runs converge to the exact solution in l1") {
    FluxModel fm(VelocityModel::quadratic());

    // rarefaction errors drop with the mesh (ladder-fit order >= 0.7)
    const double e500 = rarefaction_l1(fm, 0.75, 0.25, 500);
    const double e2000 = rarefaction_l1(fm, 0.75, 0.25, 2000);
    CHECK(e2000 <= 1e-2);
    const double order = std::log2(e500 / e2000) / 2.0;
    CHECK(order >= 0.7);

    // shock ladder-fit order >= 0.7
    auto shock_err = [&](int n) {
        GridSpec g(-2.0, 2.0, n);
        const auto traj = godunov_simulate(fm, InitialDatum::riemann(0.25, 0.75, -0.5), g, 0.5,
                                           0.5, {0.0, 0.5});
        const auto rs = exact_riemann(fm, 0.25, 0.75);
        const auto& q = traj.snapshots().back().q;
        double err = 0.0;
        for (int j = 0; j < q.size(); ++j) {
            err += std::fabs(q[j] - rs.sample((g.center(j) + 0.5) / 0.5)) * g.dx();
        }
        return err;
    };
    const double s500 = shock_err(500);
    const double s4000 = shock_err(4000);
    CHECK(std::log2(s500 / s4000) / 3.0 >= 0.7);
}
