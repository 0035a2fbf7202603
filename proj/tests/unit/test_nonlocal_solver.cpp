#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlcl/nonlocal.hpp"
#include "nlcl/solver.hpp"
#include "test_helpers.hpp"

using namespace nlcl;
using nlcl::testing::datum_from_cells;
using nlcl::testing::mollify_hat;
using nlcl::testing::random_field;
using nlcl::testing::random_monotone_datum;

namespace {

SolverConfig base_config(ModelVariant variant, KernelSpec kernel, VelocityModel velocity,
                         GridSpec grid, double t_end) {
    SolverConfig cfg;
    cfg.variant = variant;
    cfg.kernel = std::move(kernel);
    cfg.velocity = std::move(velocity);
    cfg.grid = grid;
    cfg.t_end = t_end;
    cfg.snapshot_times = {0.0, t_end};
    return cfg;
}

}  // namespace

TEST_CASE("cfl time increment") {
    GridSpec g(0.0, 1.0, 100);
    const auto w1 = InterfaceField(g, std::vector<double>(101, 1.0));
    CHECK(cfl_dt(w1, 0.5, 0.01) == doctest::Approx(0.005).epsilon(1e-15));

    const auto w0 = InterfaceField(g, std::vector<double>(101, 0.0));
    CHECK(cfl_dt(w0, 0.5, 0.01) > 1e10);  // caller clamps to the snapshot gap

    CHECK(cfl_dt(w1, 0.5, 0.005) == doctest::Approx(0.5 * cfl_dt(w1, 0.5, 0.01)));
}

TEST_CASE("two-cell hand-computed update") {
    GridSpec g(0.0, 2.0, 2);  // dx = 1
    CellField q(g, {1.0, 0.0}, {1.0, 0.0});
    // constant kernel with reach dx: speed at interface k is V(q_k)
    const auto v = VelocityModel::linear();
    const auto w = nonlocal_velocity(q, KernelSpec::constant(g.dx()), v);
    CHECK(w[0] == doctest::Approx(0.0));
    CHECK(w[1] == doctest::Approx(1.0));
    CHECK(w[2] == doctest::Approx(1.0));

    const double dt = cfl_dt(w, 0.5, g.dx());
    CHECK(dt == doctest::Approx(0.5));
    const auto q1 = step(q, w, dt);
    // fluxes: F_0 = ext_l W_0 = 0, F_1 = q_0 W_1 = 1, F_2 = q_1 W_2 = 0
    CHECK(q1[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q1[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("constant states do not move") {
    GridSpec g(-1.0, 1.0, 64);  // dyadic dx: rasterization and scan are exact
    const auto cfg = base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.2),
                                 VelocityModel::quadratic(), g, 0.4);
    const auto traj = simulate(cfg, datum_from_cells(CellField::constant(g, 0.3)));
    const auto& q = traj.snapshots().back().q;
    for (int j = 0; j < q.size(); ++j) CHECK(q[j] == 0.3);
}

TEST_CASE("one step changes mass by the boundary fluxes only") {
    GridSpec g(0.0, 1.0, 80);
    std::mt19937_64 rng(3);
    const auto q = random_field(g, rng);
    const auto v = VelocityModel::quadratic();
    const auto w = nonlocal_velocity(q, KernelSpec::exponential(0.1), v);
    const double dt = cfl_dt(w, 0.5, g.dx());
    const auto q1 = step(q, w, dt);

    double mass0 = 0.0, mass1 = 0.0;
    for (int j = 0; j < q.size(); ++j) {
        mass0 += q[j] * g.dx();
        mass1 += q1[j] * g.dx();
    }
    const double flux_in = q.extension().left * w[0];
    const double flux_out = q[q.size() - 1] * w[q.size()];
    CHECK(mass1 - mass0 == doctest::Approx(dt * (flux_in - flux_out)).epsilon(1e-14));
}

TEST_CASE("zero-speed states freeze and still hit snapshots") {
    // q at the jam density makes V(q) = 0 everywhere, so dt clamps to the
    // snapshot gaps and nothing moves
    GridSpec g(-1.0, 1.0, 64);
    auto cfg = base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.1),
                           VelocityModel::linear(), g, 0.5);
    cfg.snapshot_times = {0.0, 0.25, 0.5};
    const auto traj = simulate(cfg, datum_from_cells(CellField::constant(g, 1.0)));
    REQUIRE(traj.snapshots().size() == 3);
    CHECK(traj.audit().size() == 3);  // one clamped step per gap
    for (const auto& s : traj.snapshots()) {
        for (int j = 0; j < s.q.size(); ++j) CHECK(s.q[j] == 1.0);
    }
}

TEST_CASE("over-long steps are rejected") {
    GridSpec g(0.0, 1.0, 10);
    const auto q = CellField::constant(g, 0.2);
    const auto w = InterfaceField(g, std::vector<double>(11, 1.0));
    CHECK_THROWS_AS(step(q, w, 10.0 * g.dx()), UnstableStep);
}

TEST_CASE("config validation") {
    SolverConfig cfg = base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.1),
                                   VelocityModel::linear(), GridSpec(0.0, 1.0, 10), 1.0);
    cfg.cfl = 0.9;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.cfl = 0.5;
    cfg.snapshot_times = {0.0, 2.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.snapshot_times = {0.0, 1.0};
    cfg.kernel.reset();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.variant = ModelVariant::local;
    CHECK_NOTHROW(cfg.validate());
    CHECK_THROWS_AS(simulate(cfg, InitialDatum::riemann(0.5, 0.5, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("box run stays inside the initial range") {
    const auto cfg =
        base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.1),
                    VelocityModel::quadratic(), GridSpec(-2.0, 2.0, 500), 0.5);
    const auto traj = simulate(cfg, InitialDatum::box(0.25, 0.5, -0.5, 0.5));
    for (const auto& a : traj.audit()) {
        CHECK(a.min_q >= 0.25 - 1e-12);
        CHECK(a.max_q <= 0.75 + 1e-12);
    }
    // conservation ledger balances
    const auto& aud = traj.audit();
    for (const auto& a : aud) {
        CHECK(std::fabs(a.mass - aud.front().mass - (a.flux_in_accum - a.flux_out_accum)) <=
              1e-10);
    }
}

TEST_CASE("states touching zero stay nonnegative") {
    const auto cfg =
        base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.05),
                    VelocityModel::linear(), GridSpec(-2.0, 2.0, 400), 0.4);
    const auto traj = simulate(cfg, InitialDatum::box(0.0, 0.6, -0.5, 0.5));
    for (const auto& a : traj.audit()) CHECK(a.min_q >= -1e-12);
}

TEST_CASE("snapshots hit requested times exactly and carry consistent speeds") {
    auto cfg = base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.1),
                           VelocityModel::quadratic(), GridSpec(-2.0, 2.0, 300), 0.3);
    cfg.snapshot_times = {0.0, 0.1, 0.2, 0.3};
    const auto traj = simulate(cfg, InitialDatum::box(0.25, 0.5, -0.5, 0.5));
    REQUIRE(traj.snapshots().size() == 4);
    CHECK(traj.snapshots()[1].time == 0.1);
    CHECK(traj.snapshots()[2].time == 0.2);

    for (const auto& snap : traj.snapshots()) {
        const auto w = model_velocity(cfg, snap.q);
        for (int i = 0; i < w.size(); ++i) {
            CHECK(snap.w[i] == doctest::Approx(w[i]).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(traj.at_time(0.15), SnapshotMissing);
}

TEST_CASE("monotone data stay monotone for every kernel and velocity") {
    std::mt19937_64 rng(101);
    const std::vector<KernelSpec> kernels = {KernelSpec::exponential(0.1),
                                             KernelSpec::constant(0.1),
                                             nlcl::testing::triangular_kernel(0.1)};
    const std::vector<VelocityModel> velocities = {
        VelocityModel::linear(), VelocityModel::quadratic(),
        VelocityModel::polynomial({1.0, -2.0, 1.0}, "convex"),
        VelocityModel::greenshields(3, 1.0, 1.0)};
    for (int rep = 0; rep < 2; ++rep) {
        for (bool increasing : {true, false}) {
            const auto datum = random_monotone_datum(rng, increasing);
            for (const auto& k : kernels) {
                for (const auto& v : velocities) {
                    const auto cfg = base_config(ModelVariant::nonlocal_velocity, k, v,
                                                 GridSpec(-2.0, 2.0, 200), 0.2);
                    const auto traj = simulate(cfg, datum);
                    for (const auto& a : traj.audit()) {
                        CHECK((increasing ? a.defect_incr : a.defect_decr) <= 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("nonlocal-in-solution velocity field") {
    GridSpec g(0.0, 1.0, 100);
    const auto v = VelocityModel::quadratic();
    const auto k = KernelSpec::exponential(0.1);

    const auto w = nonlocal_solution_velocity(CellField::constant(g, 0.4), k, v);
    for (int i = 0; i <= 100; ++i) CHECK(w[i] == doctest::Approx(v(0.4)).epsilon(1e-14));

    // scan path agrees with the quadrature path
    std::mt19937_64 rng(5);
    const auto q = random_field(g, rng);
    const auto a = nonlocal_solution_velocity(q, k, v);
    const auto b = nonlocal_solution_velocity_exponential_scan(q, k, v);
    for (int i = 0; i <= 100; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
}

TEST_CASE("the two nonlocal variants coincide for affine velocities") {
    const auto datum = InitialDatum::box(0.25, 0.5, -0.5, 0.5);
    auto cfg_v = base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.05),
                             VelocityModel::linear(), GridSpec(-2.0, 2.0, 500), 0.4);
    auto cfg_s = cfg_v;
    cfg_s.variant = ModelVariant::nonlocal_solution;
    const auto qa = simulate(cfg_v, datum).snapshots().back().q;
    const auto qb = simulate(cfg_s, datum).snapshots().back().q;
    for (int j = 0; j < qa.size(); ++j) {
        CHECK(std::fabs(qa[j] - qb[j]) <= 1e-12);
    }
}

TEST_CASE("monotone riemann data keep zero defect at all snapshots") {
    auto cfg = base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.1),
                           VelocityModel::quadratic(), GridSpec(-2.0, 2.0, 400), 0.5);
    cfg.snapshot_times = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    const auto traj = simulate(cfg, InitialDatum::riemann(0.75, 0.25, 0.0));
    for (const auto& s : traj.snapshots()) {
        CHECK(monotonicity_defect(s.q, Direction::decreasing) <= 1e-12);
    }
}

TEST_CASE("wider kernels smooth the leading front more") {
    // box datum: at t = 0.5 the leading front spreads with the reach
    auto front_width = [](double eta) {
        const auto cfg =
            base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(eta),
                        VelocityModel::quadratic(), GridSpec(-2.0, 2.0, 1000), 0.5);
        const auto traj = simulate(cfg, InitialDatum::box(0.25, 0.5, -0.5, 0.5));
        const auto& q = traj.snapshots().back().q;
        const GridSpec& g = q.grid();
        double lo = 2.0, hi = -2.0;
        for (int j = 0; j < q.size(); ++j) {
            if (g.center(j) > 0.2 && q[j] > 0.3 && q[j] < 0.7) {
                lo = std::min(lo, g.center(j));
                hi = std::max(hi, g.center(j));
            }
        }
        return hi - lo;
    };
    const double wide = front_width(1e-1);
    const double sharp = front_width(1e-3);
    CHECK(wide > sharp + 0.05);
}

TEST_CASE("mollified initial data change the solution at first order") {
    GridSpec g(-2.0, 2.0, 1000);
    const auto box = InitialDatum::box(0.25, 0.5, -0.5, 0.5);
    const auto cfg = base_config(ModelVariant::nonlocal_velocity, KernelSpec::exponential(0.05),
                                 VelocityModel::quadratic(), g, 0.3);
    const auto base = simulate(cfg, box);
    const auto q0 = box.rasterize(g);

    double err[2];
    int i = 0;
    for (int h : {2, 4}) {  // widths 4 dx and 8 dx
        const auto traj = simulate(cfg, datum_from_cells(mollify_hat(q0, h)));
        err[i++] = l1_distance(traj.snapshots().back().q, base.snapshots().back().q,
                               {-2.0, 2.0});
    }
    const double ratio = err[1] / err[0];
    CHECK(ratio >= 1.0);  // doubling the width roughly doubles the change
    CHECK(ratio <= 3.0);
}
