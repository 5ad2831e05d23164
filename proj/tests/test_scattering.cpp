#include <doctest.h>

#include "dnlslab/fourier.hpp"
#include "dnlslab/norms.hpp"
#include "dnlslab/propagators.hpp"
#include "dnlslab/scattering.hpp"
#include "oracles.hpp"

using namespace dnlslab;

namespace {

ModelParams reference_params() {
    ModelParams p;
    p.dim = 1;
    p.power = 3;
    p.damping = 1;
    p.sign = +1;
    p.margin = 0.01;
    return p;
}

Trajectory small_run(double amp, double T, int sign = +1, bool increments = true) {
    Grid g = make_grid(1, 512, 64.0);
    ModelParams p = reference_params();
    p.sign = sign;
    Field u0 = oracles::gaussian_field(g, amp);
    SimOptions o;
    o.T = T;
    o.dt = 0.005;
    o.monitor_cadence = 0.1;
    o.track_increments = increments;
    o.keep_states = true;
    return simulate(u0, p, o);
}

}  // namespace

TEST_SUITE_BEGIN("scattering");

TEST_CASE("pullback basics") {
    Grid g = make_grid(1, 512, 64.0);
    Field f = oracles::gaussian_field(g, 0.3);
    CHECK(oracles::rel_l2_diff(pullback_state(f, 0.0), f) == 0.0);

    Trajectory lin = small_run(0.1, 2.0, 0);
    Field u0 = lin.states.front();
    for (std::size_t j : {std::size_t(5), lin.times.size() - 1}) {
        Field back = pullback_state(lin.states[j], lin.times[j]);
        CHECK(oracles::rel_l2_diff(back, u0) <= 1e-11);
    }
}

TEST_CASE("extract_phi") {
    Trajectory lin = small_run(0.1, 2.0, 0);
    ExtractOptions opt;
    ScatteringState st = extract_phi(lin, Mode::Sigma, opt);
    CHECK(st.extraction_time == doctest::Approx(2.0));
    CHECK(st.cauchy_gap <= 1e-10);
    CHECK(oracles::rel_l2_diff(st.phi, lin.states.front()) <= 1e-11);

    Trajectory zero = small_run(0.0, 1.0);
    ScatteringState z = extract_phi(zero, Mode::Sigma, opt);
    CHECK(norm(z.phi, NormSpec::L2()) == 0.0);
    CHECK(z.cauchy_gap == 0.0);

    // nonlinear short run with an impossible tolerance must refuse
    Trajectory nl = small_run(0.3, 1.0);
    ExtractOptions tight;
    tight.tol = 1e-14;
    CHECK_THROWS(extract_phi(nl, Mode::Sigma, tight));
}

TEST_CASE("tail_integral") {
    for (double beta : {0.5, 1.0, 2.0})
        for (double t : {0.3, 2.0, 11.0})
            CHECK(tail_integral(0.0, beta, t) ==
                  doctest::Approx(std::exp(-beta * t) / beta).epsilon(1e-13));
    CHECK(tail_integral(1.0, 1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    double quad = oracles::integrate(
        [](double s) { return std::exp(-2.0 * s) / s; }, 3.0, 60.0, 1e-17);
    CHECK(tail_integral(-1.0, 2.0, 3.0) == doctest::Approx(quad).epsilon(1e-10));
    CHECK_THROWS(tail_integral(0.0, -1.0, 1.0));
    CHECK_THROWS(tail_integral(0.0, 1.0, 0.0));
}

TEST_CASE("elemlem_check") {
    std::vector<double> grid;
    for (int j = 1; j <= 30; ++j) grid.push_back(j);
    auto r0 = elemlem_check(0.0, 2.0, grid);
    for (double r : r0) CHECK(r == doctest::Approx(0.5).epsilon(1e-13));

    auto rm1 = elemlem_check(-1.0, 2.0, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid[j] * 2.0 < 10.0) continue;
        CHECK(rm1[j] * 2.0 == doctest::Approx(1.0).epsilon(0.05));
    }

    auto r3 = elemlem_check(3.0, 1.0, grid);
    for (double r : r3) {
        CHECK(std::isfinite(r));
        CHECK(r > 0);
        CHECK(r < 1e6);
    }
    CHECK_THROWS(elemlem_check(0.0, 1.0, {0.0, 1.0}));
}

TEST_CASE("i2_norm") {
    Grid g = make_grid(1, 512, 64.0);
    ModelParams p = reference_params();
    CHECK(i2_norm(zero_field(g), 1.0, p) == 0.0);

    Field phi = oracles::gaussian_field(g, 0.1);
    // factorization: i2 / (2^{-q} tail) is constant in t, = || |phihat|^p ||_L2
    double q = 0.5 * p.dim * (p.power - 1.0);
    double c1 = i2_norm(phi, 2.0, p) / (std::pow(2.0, -q) * tail_integral(-q, p.gauge_rate(), 2.0));
    double c2 = i2_norm(phi, 7.0, p) / (std::pow(2.0, -q) * tail_integral(-q, p.gauge_rate(), 7.0));
    CHECK(c1 == doctest::Approx(c2).epsilon(1e-12));

    // against the test-side grid sum of | |phihat|^3 |^2
    Field phihat = fourier_transform(phi, Direction::forward);
    double acc = 0;
    for (const auto& z : phihat.samples) acc += std::pow(std::abs(z), 6.0);
    double want = std::sqrt(acc * g.dual_spacing());
    CHECK(c1 == doctest::Approx(want).epsilon(1e-12));

    // Lemma 4.1 sandwich at the rate t^{-q} e^{-a(p-1)t}
    for (double t : {5.0, 6.0, 8.0}) {
        double model = std::pow(t, -q) * std::exp(-p.gauge_rate() * t);
        double ratio = i2_norm(phi, t, p) / (std::pow(2.0, -q) * want * model);
        CHECK(ratio > 0.3);
        CHECK(ratio < 1.0);
    }
}

TEST_CASE("error_curve") {
    ExtractOptions opt;

    // linear run: the error vanishes along both computation paths
    Trajectory lin = small_run(0.1, 2.0, 0);
    ScatteringState st = extract_phi(lin, Mode::Sigma, opt);
    ErrorCurve from_increments = error_curve(lin, st, NormSpec::L2(), 1.0);
    for (double v : from_increments.values) CHECK(v <= 1e-11);

    Trajectory lin2 = small_run(0.1, 2.0, 0, false);
    ScatteringState st2 = extract_phi(lin2, Mode::Sigma, opt);
    ErrorCurve from_states = error_curve(lin2, st2, NormSpec::L2(), 1.0);
    for (double v : from_states.values) CHECK(v <= 1e-11);

    // nonlinear run: the two paths agree where roundoff is negligible
    Trajectory nl = small_run(0.2, 2.0);
    ExtractOptions loose;
    loose.tol = 1e-2;  // short horizon, the gap has not closed yet
    ScatteringState stn = extract_phi(nl, Mode::Sigma, loose);
    ErrorCurve inc = error_curve(nl, stn, NormSpec::L2(), 0.5);
    Trajectory nl_states = nl;
    nl_states.increment_blocks.clear();
    ErrorCurve dir = error_curve(nl_states, stn, NormSpec::L2(), 0.5);
    REQUIRE(inc.times.size() == dir.times.size());
    for (std::size_t j = 0; j < inc.times.size(); ++j)
        CHECK(inc.values[j] == doctest::Approx(dir.values[j]).epsilon(1e-6));

    CHECK_THROWS(error_curve(nl, stn, NormSpec::Linf(), 0.5));
    CHECK_THROWS(error_curve(nl, stn, NormSpec::Hs(2), 0.5));
}

TEST_CASE("fit_rate recovers synthetic models") {
    ErrorCurve c;
    c.spec = NormSpec::L2();
    for (int j = 0; j <= 200; ++j) {
        double t = 1.0 + 0.1 * j;
        c.times.push_back(t);
        c.values.push_back(2.0 * std::pow(t, -1.0) * std::exp(-2.0 * t));
    }
    RateFit fit = fit_rate(c, 2.0, 15.0);
    CHECK(fit.C == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.gamma == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.delta == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.residual <= 1e-12);

    ErrorCurve pert;
    pert.spec = NormSpec::L2();
    for (int j = 0; j <= 400; ++j) {
        double t = 1.0 + 0.05 * j;
        pert.times.push_back(t);
        pert.values.push_back(std::pow(t, -1.0) * std::exp(-2.0 * t) * (1.0 + 0.1 / t));
    }
    RateFit pfit = fit_rate(pert, 10.0, 20.0);
    CHECK(std::fabs(pfit.gamma - 1.0) <= 0.05);

    CHECK_THROWS(fit_rate(c, 19.0, 19.5));  // too few samples
    c.values[50] = 0.0;
    CHECK_THROWS(fit_rate(c, 2.0, 15.0));  // nonpositive sample
}

TEST_SUITE_END();
