#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlcl/diagnostics.hpp"
#include "nlcl/entropy.hpp"
#include "nlcl/local.hpp"
#include "nlcl/solver.hpp"
#include "test_helpers.hpp"

using namespace nlcl;

namespace {

// traveling discontinuity q_l -> q_r at constant speed, exact cell averages
Trajectory glued_wave(const GridSpec& g, double q_l, double q_r, double x0, double speed,
                      double t_end, int snaps, const VelocityModel& v) {
    SolverConfig cfg;
    cfg.variant = ModelVariant::local;
    cfg.velocity = v;
    cfg.grid = g;
    cfg.t_end = t_end;
    std::vector<Snapshot> out;
    std::vector<StepAudit> audit;
    for (int s = 0; s < snaps; ++s) {
        const double t = t_end * s / (snaps - 1);
        cfg.snapshot_times.push_back(t);
        const double xs = x0 + speed * t;
        std::vector<double> vals(static_cast<size_t>(g.n_cells()));
        for (int j = 0; j < g.n_cells(); ++j) {
            const double a = g.interface(j), b = g.interface(j + 1);
            if (b <= xs) {
                vals[static_cast<size_t>(j)] = q_l;
            } else if (a >= xs) {
                vals[static_cast<size_t>(j)] = q_r;
            } else {
                vals[static_cast<size_t>(j)] = (q_l * (xs - a) + q_r * (b - xs)) / (b - a);
            }
        }
        CellField q(g, std::move(vals), {q_l, q_r});
        auto w = model_velocity(cfg, q);
        out.push_back({t, std::move(q), std::move(w)});
        StepAudit row;
        row.time = t;
        audit.push_back(row);
    }
    return Trajectory(std::move(cfg), std::move(out), std::move(audit));
}

Trajectory godunov_shock(int n, int snaps) {
    FluxModel fm(VelocityModel::quadratic());
    std::vector<double> times;
    for (int i = 0; i < snaps; ++i) times.push_back(0.5 * i / (snaps - 1));
    return godunov_simulate(fm, InitialDatum::riemann(0.25, 0.75, -0.5), GridSpec(-2.0, 2.0, n),
                            0.5, 0.5, times);
}

}  // namespace

TEST_CASE("tailored pair for the quadratic velocity has closed form") {
    const auto v = VelocityModel::quadratic();
    const double q_lo = 0.25;
    const auto pair = build_entropy_pair(v, q_lo, 0.75, EntropyKind::tailored);

    auto beta_exact = [q_lo](double s) {
        auto anti = [q_lo](double u) {
            return u * u - 1.5 * u * u * u * u - 2.0 * q_lo * u + 2.0 * q_lo * u * u * u;
        };
        return anti(s) - anti(q_lo);
    };
    for (int i = 0; i <= 100; ++i) {
        const double s = q_lo + 0.5 * i / 100;
        CHECK(pair.alpha(s) == doctest::Approx((s - q_lo) * (s - q_lo)).epsilon(1e-10));
        CHECK(pair.alpha_prime(s) == doctest::Approx(2.0 * (s - q_lo)).epsilon(1e-10));
        CHECK(pair.beta(s) == doctest::Approx(beta_exact(s)).epsilon(1e-10));
    }

    // compatibility holds exactly at the table nodes
    const auto& nodes = pair.node_points();
    for (size_t i = 0; i < nodes.size(); ++i) {
        const double s = nodes[i];
        const double expected = pair.node_alpha_prime()[i] * (v(s) + s * v.deriv(s));
        CHECK(std::fabs(pair.node_beta_prime()[i] - expected) <= 1e-12);
    }
}

TEST_CASE("degenerate and smoothed entropies") {
    const auto v = VelocityModel::quadratic();

    EntropyBuildOptions zero;
    zero.custom_second = [](double) { return 0.0; };
    const auto flat = build_entropy_pair(v, 0.2, 0.8, EntropyKind::custom, zero);
    for (int i = 0; i <= 20; ++i) {
        const double s = 0.2 + 0.6 * i / 20;
        CHECK(flat.alpha(s) == 0.0);
        CHECK(flat.beta(s) == 0.0);
    }

    EntropyBuildOptions kz;
    kz.kruzkov_center = 0.5;
    kz.kruzkov_width = 0.02;
    const auto smooth = build_entropy_pair(v, 0.0, 1.0, EntropyKind::kruzkov_smoothed, kz);
    // anchored at q_lo, the smoothed |s - c| becomes 2 max(0, s - c) up to
    // the transition width
    for (double s : {0.1, 0.3, 0.7, 0.9}) {
        CHECK(std::fabs(smooth.alpha(s) - 2.0 * std::max(0.0, s - 0.5)) <= 0.05);
    }

    CHECK_THROWS_AS(build_entropy_pair(VelocityModel::linear(), 0.0, 1.0, EntropyKind::tailored),
                    EntropyUnboundedAtZero);
    CHECK_NOTHROW(build_entropy_pair(v, 0.0, 1.0, EntropyKind::tailored));  // V'(0) = 0
}

TEST_CASE("entropy functional vanishes exactly on constant runs") {
    SolverConfig cfg;
    cfg.variant = ModelVariant::nonlocal_velocity;
    cfg.kernel = KernelSpec::exponential(0.1);
    cfg.velocity = VelocityModel::quadratic();
    cfg.grid = GridSpec(-2.0, 2.0, 256);  // dyadic: the datum rasterizes exactly
    cfg.t_end = 0.5;
    for (int i = 0; i <= 10; ++i) cfg.snapshot_times.push_back(0.05 * i);
    const auto traj = simulate(cfg, InitialDatum::riemann(0.4, 0.4, 0.0));

    const auto pair = build_entropy_pair(cfg.velocity, 0.2, 0.8, EntropyKind::tailored);
    const auto res = entropy_residual(traj, pair, {});
    for (double e : res.per_phi) CHECK(std::fabs(e) <= 1e-14);  // pure roundoff
}

TEST_CASE("entropy functional is linear in the test function") {
    const auto traj = godunov_shock(200, 26);
    const auto pair =
        build_entropy_pair(VelocityModel::quadratic(), 0.25, 0.75, EntropyKind::tailored);
    const BumpTestFunction p1{0.2, -0.4, 0.15, 0.3};
    const BumpTestFunction p2{0.3, -0.2, 0.2, 0.25};
    const double e1 = entropy_functional(traj, pair, p1);
    const double e2 = entropy_functional(traj, pair, p2);
    const double esum = entropy_functional(
        traj, pair, [&](double t, double x) { return p1.value(t, x) + p2.value(t, x); },
        {std::min(p1.t_lo(), p2.t_lo()), std::max(p1.t_hi(), p2.t_hi())},
        {std::min(p1.x_lo(), p2.x_lo()), std::max(p1.x_hi(), p2.x_hi())});
    CHECK(esum == doctest::Approx(e1 + e2).epsilon(1e-12));
}

TEST_CASE("admissible shocks pass, the glued reversed wave fails") {
    const auto v = VelocityModel::quadratic();
    const auto pair = build_entropy_pair(v, 0.25, 0.75, EntropyKind::tailored);

    double bad_prev = 0.0;
    for (int n : {500, 1000}) {
        const auto good = godunov_shock(n, 251);
        const auto res = entropy_residual(good, pair, {});
        CHECK(res.worst >= -entropy_error_budget(good, pair));
        CHECK(res.worst >= -1e-9);  // observed far above the budget

        // decreasing jump glued at shock speed should have been a fan
        const auto bad = glued_wave(GridSpec(-2.0, 2.0, n), 0.75, 0.25, 0.0, 0.1875, 0.5, 251, v);
        const auto res_bad = entropy_residual(bad, pair, {});
        CHECK(res_bad.worst <= -1e-2);
        if (bad_prev != 0.0) {
            CHECK(std::fabs(res_bad.worst) >= 0.8 * std::fabs(bad_prev));  // no dx shrinkage
        }
        bad_prev = res_bad.worst;
    }
}

TEST_CASE("test functions must fit the recorded window") {
    const auto traj = godunov_shock(100, 6);
    const auto pair =
        build_entropy_pair(VelocityModel::quadratic(), 0.25, 0.75, EntropyKind::tailored);
    CHECK_THROWS_AS(entropy_functional(traj, pair, BumpTestFunction{0.45, 0.0, 0.2, 0.2}),
                    TestFunctionOutOfWindow);
    CHECK_THROWS_AS(entropy_functional(traj, pair, BumpTestFunction{0.2, -1.95, 0.1, 0.2}),
                    TestFunctionOutOfWindow);

    TestFunctionFamily family;
    family.widths = {0.7};  // cannot fit a 0.5-long time window
    CHECK_THROWS_AS(entropy_residual(traj, pair, family), TestFunctionOutOfWindow);
}

TEST_CASE("tv series carry the declared bounds") {
    SolverConfig cfg;
    cfg.variant = ModelVariant::nonlocal_velocity;
    cfg.kernel = KernelSpec::exponential(0.1);
    cfg.velocity = VelocityModel::quadratic();
    cfg.grid = GridSpec(-2.0, 2.0, 500);
    cfg.t_end = 0.5;
    for (int i = 0; i <= 10; ++i) cfg.snapshot_times.push_back(0.05 * i);

    SUBCASE("box datum: tv of the speed decays under its bound") {
        const auto traj = simulate(cfg, InitialDatum::box(0.25, 0.5, -0.5, 0.5));
        const auto series = tv_series(traj, FieldSelector::w);
        // ||V'|| on [0.25, 0.75] is 1.5 and |q0|_tv is 1
        CHECK(series.declared_bound == doctest::Approx(1.5).epsilon(1e-6));
        CHECK(series.values.front() <= series.declared_bound + 1e-12);
        for (size_t i = 1; i < series.values.size(); ++i) {
            CHECK(series.values[i] <= series.values[i - 1] + 1e-8);
        }
        // per-step decay from the audit as well
        const auto& aud = traj.audit();
        for (size_t i = 1; i < aud.size(); ++i) {
            CHECK(aud[i].tv_w <= aud[i - 1].tv_w + 1e-8);
        }
    }

    SUBCASE("monotone datum: tv of the state is conserved") {
        const auto traj = simulate(cfg, InitialDatum::riemann(0.75, 0.25, 0.0));
        const auto series = tv_series(traj, FieldSelector::q);
        CHECK(series.declared_bound == doctest::Approx(0.5).epsilon(1e-12));
        for (double tv : series.values) {
            CHECK(tv == doctest::Approx(0.5).epsilon(1e-10));
        }
    }
}

TEST_CASE("oleinik constants") {
    FluxModel fm(VelocityModel::quadratic());

    SUBCASE("constant and monotone-decreasing runs fit zero") {
        GridSpec g(-1.0, 1.0, 256);  // dyadic: the jump sits on an interface
        const auto flat = godunov_simulate(fm, InitialDatum::riemann(0.4, 0.4, 0.0), g, 0.5, 0.4,
                                           {0.0, 0.2, 0.4});
        CHECK(oleinik_check(flat, OleinikOrientation::upper).constant == 0.0);
        CHECK(oleinik_check(flat, OleinikOrientation::lower).constant == 0.0);

        const auto fan = godunov_simulate(fm, InitialDatum::riemann(0.75, 0.25, 0.0), g, 0.5,
                                          0.4, {0.0, 0.2, 0.4});
        // decreasing profile: any upward slope is pure roundoff
        CHECK(oleinik_check(fan, OleinikOrientation::upper).constant <= 1e-12);
    }

    SUBCASE("rarefaction slopes fit a stable constant") {
        auto fitted = [&](int n) {
            GridSpec g(-2.0, 2.0, n);
            std::vector<double> times;
            for (int i = 0; i <= 10; ++i) times.push_back(0.05 * i);
            const auto traj = godunov_simulate(fm, InitialDatum::riemann(0.75, 0.25, 0.0), g,
                                               0.5, 0.5, times);
            return oleinik_check(traj, OleinikOrientation::lower).constant;
        };
        const double c1 = fitted(1000);
        const double c2 = fitted(2000);
        CHECK(c1 > 0.5);
        CHECK(c1 < 2.0);
        CHECK(std::fabs(c2 / c1 - 1.0) <= 0.3);
    }
}

TEST_CASE("convergence table") {
    FluxModel fm(VelocityModel::quadratic());
    const auto box = InitialDatum::box(0.25, 0.5, -0.5, 0.5);
    const auto ref = godunov_simulate(fm, box, GridSpec(-2.0, 2.0, 1600), 0.5, 0.25, {0.0, 0.25});

    SUBCASE("reference against itself is zero") {
        const auto rows = convergence_table({{1.0, &ref}}, ref, {-2.0, 2.0}, 0.25);
        CHECK(rows[0].l1_error == 0.0);
    }

    SUBCASE("eta ladder decreases and sorts descending") {
        std::vector<Trajectory> runs;
        for (double eta : {1e-1, 1e-2}) {
            SolverConfig cfg;
            cfg.variant = ModelVariant::nonlocal_velocity;
            cfg.kernel = KernelSpec::exponential(eta);
            cfg.velocity = VelocityModel::quadratic();
            cfg.grid = GridSpec(-2.0, 2.0, 400);
            cfg.t_end = 0.25;
            cfg.snapshot_times = {0.0, 0.25};
            runs.push_back(simulate(cfg, box));
        }
        const auto rows = convergence_table({{1e-2, &runs[1]}, {1e-1, &runs[0]}}, ref,
                                            {-2.0, 2.0}, 0.25);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].eta == 1e-1);
        CHECK(rows[1].l1_error < rows[0].l1_error);

        CHECK_THROWS_AS(convergence_table({{1e-1, &runs[0]}}, ref, {-2.0, 2.0}, 0.1),
                        SnapshotMissing);
        const auto odd = godunov_simulate(fm, box, GridSpec(-2.0, 2.0, 1500), 0.5, 0.25,
                                          {0.0, 0.25});
        CHECK_THROWS_AS(convergence_table({{1e-1, &runs[0]}}, odd, {-2.0, 2.0}, 0.25),
                        GridMismatch);
    }

    SUBCASE("whole-cell translations leave the error unchanged") {
        GridSpec g(-2.0, 2.0, 400);
        const double shift = 16.0 * g.dx();
        const auto moved = InitialDatum::box(0.25, 0.5, -0.5 + shift, 0.5 + shift);
        SolverConfig cfg;
        cfg.variant = ModelVariant::nonlocal_velocity;
        cfg.kernel = KernelSpec::exponential(0.05);
        cfg.velocity = VelocityModel::quadratic();
        cfg.grid = g;
        cfg.t_end = 0.2;
        cfg.snapshot_times = {0.0, 0.2};
        const auto run_a = simulate(cfg, box);
        const auto run_b = simulate(cfg, moved);
        const auto ref_a =
            godunov_simulate(fm, box, GridSpec(-2.0, 2.0, 1600), 0.5, 0.2, {0.0, 0.2});
        const auto ref_b =
            godunov_simulate(fm, moved, GridSpec(-2.0, 2.0, 1600), 0.5, 0.2, {0.0, 0.2});
        const double e_a =
            convergence_table({{1.0, &run_a}}, ref_a, {-1.5, 1.5}, 0.2)[0].l1_error;
        const double e_b = convergence_table({{1.0, &run_b}}, ref_b,
                                             {-1.5 + shift, 1.5 + shift}, 0.2)[0].l1_error;
        CHECK(e_a == doctest::Approx(e_b).epsilon(1e-10));
    }
}

TEST_CASE("diagnose aggregates the verdicts") {
    SolverConfig cfg;
    cfg.variant = ModelVariant::nonlocal_velocity;
    cfg.kernel = KernelSpec::exponential(0.1);
    cfg.velocity = VelocityModel::quadratic();
    cfg.grid = GridSpec(-2.0, 2.0, 400);
    cfg.t_end = 0.4;
    for (int i = 0; i <= 8; ++i) cfg.snapshot_times.push_back(0.05 * i);
    const auto traj = simulate(cfg, InitialDatum::box(0.25, 0.5, -0.5, 0.5));

    DiagnosticsOptions opts;
    opts.check_tv_decay = true;
    opts.check_entropy = true;
    const auto rep = diagnose(traj, opts);
    CHECK(rep.max_principle_ok);
    CHECK(rep.nonnegative_ok);
    CHECK(rep.conservation_ok);
    CHECK(rep.tv_w_within_bound);
    CHECK(rep.tv_w_nonincreasing);
    CHECK(rep.entropy_checked);
    CHECK(rep.entropy_ok);
    CHECK(rep.all_pass());

    const auto json_text = rep.to_json();
    CHECK(json_text.find("\"all_pass\": true") != std::string::npos);
    CHECK(rep.verdict_csv().find("max_principle_min") != std::string::npos);
}
