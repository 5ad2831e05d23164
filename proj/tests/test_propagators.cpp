#include <doctest.h>

#include "dnlslab/fourier.hpp"
#include "dnlslab/modspace.hpp"
#include "dnlslab/norms.hpp"
#include "dnlslab/propagators.hpp"
#include "oracles.hpp"

using namespace dnlslab;

TEST_SUITE_BEGIN("propagators");

TEST_CASE("free propagator basics") {
    Grid g = make_grid(1, 512, 64.0);
    oracles::Rng rng(21);
    Field f = oracles::random_packet(g, rng, 2.0, 2.0, 4.0);

    Field same = free_propagate(f, 0.0);
    CHECK(oracles::rel_l2_diff(same, f) <= 1e-14);

    double l2 = norm(f, NormSpec::L2());
    for (double t : {0.3, 1.0, 7.0, 100.0})
        CHECK(std::fabs(norm(free_propagate(f, t), NormSpec::L2()) - l2) <= 1e-12 * l2);

    // group law
    Field ab = free_propagate(free_propagate(f, 0.7), 1.6);
    Field once = free_propagate(f, 2.3);
    CHECK(oracles::rel_l2_diff(ab, once) <= 1e-11);

    // time reversal of the linear flow
    Field back = free_propagate(free_propagate(f, 3.0), -3.0);
    CHECK(oracles::rel_l2_diff(back, f) <= 1e-11);
}

TEST_CASE("Gaussian closed-form evolution") {
    Grid g = make_grid(1, 1024, 128.0);
    Field f = oracles::gaussian_field(g, 1.0);  // e^{-x^2/2}
    double t = 1.0;
    Field u = free_propagate(f, t);
    // e^{itD} e^{-x^2/2} = (1+2it)^{-1/2} exp(-x^2 / (2(1+2it)))
    complex a(1.0, 2.0 * t);
    complex pref = 1.0 / std::sqrt(a);
    double num = 0, den = 0;
    std::array<int, 3> idx{};
    for (std::size_t i = 0; i < u.samples.size(); ++i) {
        decode_index(g, i, idx);
        double x = g.x(idx[0]);
        complex want = pref * std::exp(-x * x / (2.0 * a));
        num += std::norm(u.samples[i] - want);
        den += std::norm(want);
    }
    CHECK(std::sqrt(num / den) <= 1e-8);
}

TEST_CASE("MDFM modulus identity at growing time") {
    Grid g = make_grid(1, 1024, 64.0);
    Field f = oracles::gaussian_field(g, 1.0);
    Field fhat = fourier_transform(f, Direction::forward);

    auto modulus_err = [&](double t) {
        DilatedField md = mdfm_propagate(f, t);
        double pref = std::pow(2.0 * t, -0.5);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < md.samples.size(); ++i) {
            double want = pref * std::abs(fhat.samples[i]);
            num += (std::abs(md.samples[i]) - want) * (std::abs(md.samples[i]) - want);
            den += want * want;
        }
        return std::sqrt(num / den);
    };
    double e5 = modulus_err(5.0), e20 = modulus_err(20.0), e50 = modulus_err(50.0);
    CHECK(e20 < e5);
    CHECK(e50 < e20);
    CHECK(e50 <= 0.01);
}

TEST_CASE("MDFM dilation is an L2 isometry on the dilated lattice") {
    Grid g = make_grid(1, 1024, 64.0);
    Field f = oracles::gaussian_field(g, 0.7);
    double l2 = norm(f, NormSpec::L2());
    for (double t : {0.5, 2.0, 10.0}) {
        DilatedField md = mdfm_propagate(f, t);
        double acc = 0;
        for (const auto& z : md.samples) acc += std::norm(z);
        double dilated_norm = std::sqrt(acc * 2.0 * t * g.dual_spacing());
        CHECK(std::fabs(dilated_norm - l2) <= 1e-8 * l2);
    }
    Field zero = zero_field(g);
    DilatedField mz = mdfm_propagate(zero, 1.0);
    for (const auto& z : mz.samples) CHECK(std::abs(z) == 0.0);
    CHECK_THROWS(mdfm_propagate(f, 0.0));
    CHECK_THROWS(mdfm_propagate(f, -1.0));
}

TEST_CASE("MDFM consistency against the multiplier propagator") {
    Grid g = make_grid(1, 4096, 128.0);
    Field f = window_field(WindowSpec::bump(8.0), g);
    double l2 = norm(f, NormSpec::L2());
    CHECK(mdfm_consistency(f, 0.5) <= 1e-8 * l2);
    CHECK(mdfm_consistency(zero_field(g), 1.0) == 0.0);

    // wide spectrum dilating far out of the box must be signaled
    Field sharp = oracles::gaussian_field(g, 1.0, 8.0);
    CHECK_THROWS(mdfm_consistency(sharp, 10.0));

    // not band-limited: noisy top third of the spectrum
    Field noisy = f;
    oracles::Rng rng(13);
    Field nh = fourier_transform(noisy, Direction::forward);
    for (auto& z : nh.samples) z += 1e-4 * rng.cnormal();
    noisy = fourier_transform(nh, Direction::inverse);
    CHECK_THROWS(mdfm_consistency(noisy, 0.5));
}

TEST_CASE("dispersive ratio") {
    Grid g = make_grid(1, 1024, 256.0);
    Field f = oracles::gaussian_field(g, 1.0);
    double r10 = dispersive_ratio(f, 10.0);
    CHECK(r10 <= 1.0 + 1e-10);
    CHECK(r10 >= 0.9);
    // the window bounds the usable horizon: past t ~ L/4 the wrapped
    // periodic tails re-concentrate and the free-space bound is off
    for (double t : {1.0, 5.0, 20.0, 50.0}) {
        double r = dispersive_ratio(f, t);
        CHECK(r <= 1.05);
    }
    CHECK_THROWS(dispersive_ratio(zero_field(g), 1.0));
    CHECK_THROWS(dispersive_ratio(f, 0.0));
}

TEST_CASE("dispersive ratio over a random family") {
    Grid g = make_grid(1, 4096, 512.0);
    oracles::Rng rng(2026);
    for (int q = 0; q < 20; ++q) {
        Field f = oracles::random_packet(g, rng, 1.0, 4.0, 8.0);
        for (double t : {1.0, 2.0, 5.0, 10.0, 50.0})
            CHECK(dispersive_ratio(f, t) <= 1.05);
    }
}

TEST_SUITE_END();
