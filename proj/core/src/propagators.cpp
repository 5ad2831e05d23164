#include "dnlslab/propagators.hpp"

#include <stdexcept>

#include "dnlslab/fourier.hpp"
#include "dnlslab/norms.hpp"

namespace dnlslab {

namespace {

double xi_norm_sq(const Grid& g, std::size_t flat) {
    std::array<int, 3> idx{};
    decode_index(g, flat, idx);
    double r2 = 0;
    for (int d = 0; d < g.dim; ++d) {
        double xi = g.xi(idx[static_cast<std::size_t>(d)]);
        r2 += xi * xi;
    }
    return r2;
}

double x_norm_sq(const Grid& g, std::size_t flat) {
    std::array<int, 3> idx{};
    decode_index(g, flat, idx);
    double r2 = 0;
    for (int d = 0; d < g.dim; ++d) {
        double x = g.x(idx[static_cast<std::size_t>(d)]);
        r2 += x * x;
    }
    return r2;
}

// Largest per-axis |2 t xi_k| with the sample set {flat : pred}; used for
// the box-escape accounting below.
bool dilated_in_box(const Grid& g, std::size_t flat, double t) {
    std::array<int, 3> idx{};
    decode_index(g, flat, idx);
    for (int d = 0; d < g.dim; ++d) {
        if (std::fabs(2.0 * t * g.xi(idx[static_cast<std::size_t>(d)])) > 0.5 * g.length)
            return false;
    }
    return true;
}

}  // namespace

Field free_propagate(const Field& f, double t) {
    if (f.space != Space::physical)
        throw std::invalid_argument("free_propagate: needs a physical-space field");
    Field fhat = fourier_transform(f, Direction::forward);
    for (std::size_t i = 0; i < fhat.samples.size(); ++i)
        fhat.samples[i] *= std::polar(1.0, -t * xi_norm_sq(f.grid, i));
    return fourier_transform(fhat, Direction::inverse);
}

DilatedField mdfm_propagate(const Field& f, double t) {
    if (!(t > 0)) throw std::invalid_argument("mdfm_propagate: t must be positive");
    if (f.space != Space::physical)
        throw std::invalid_argument("mdfm_propagate: needs a physical-space field");
    const Grid& g = f.grid;

    Field chirped = f;
    for (std::size_t i = 0; i < chirped.samples.size(); ++i)
        chirped.samples[i] *= std::polar(1.0, x_norm_sq(g, i) / (4.0 * t));
    Field hat = fourier_transform(chirped, Direction::forward);

    // (2it)^{-n/2} on the principal branch, phase e^{-i n pi/4} for t > 0.
    const complex dilation =
        std::pow(2.0 * t, -0.5 * g.dim) * std::polar(1.0, -g.dim * M_PI / 4.0);

    DilatedField out{g, t, std::move(hat.samples)};
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        // chirp at the dilated point x = 2 t xi_k is e^{i t |xi_k|^2}
        out.samples[i] *= dilation * std::polar(1.0, t * xi_norm_sq(g, i));
    }
    return out;
}

double mdfm_consistency(const Field& f, double t, double escape_tol) {
    if (!(t > 0)) throw std::invalid_argument("mdfm_consistency: t must be positive");
    const Grid& g = f.grid;

    // Band-limited precondition: negligible energy in the top third of
    // the spectrum.
    Field fhat = fourier_transform(f, Direction::forward);
    double total = 0, top = 0;
    const double band_edge = (2.0 / 3.0) * g.xi_max();
    std::array<int, 3> idx{};
    for (std::size_t i = 0; i < fhat.samples.size(); ++i) {
        double e = std::norm(fhat.samples[i]);
        total += e;
        decode_index(g, i, idx);
        for (int d = 0; d < g.dim; ++d) {
            if (std::fabs(g.xi(idx[static_cast<std::size_t>(d)])) > band_edge) {
                top += e;
                break;
            }
        }
    }
    if (total == 0) return 0.0;
    if (top > 1e-16 * total)
        throw std::invalid_argument("mdfm_consistency: field is not band-limited");

    DilatedField md = mdfm_propagate(f, t);

    // Dilated points escaping the box are an error when they carry
    // non-negligible mass; they cannot be compared against the periodic
    // interpolant.
    double in_mass = 0, out_mass = 0;
    for (std::size_t i = 0; i < md.samples.size(); ++i) {
        double e = std::norm(md.samples[i]);
        if (dilated_in_box(g, i, t)) in_mass += e; else out_mass += e;
    }
    if (out_mass > escape_tol * (in_mass + out_mass))
        throw std::runtime_error(
            "mdfm_consistency: dilated points escape the box with significant mass");

    std::vector<std::vector<double>> pts;
    std::vector<std::size_t> in_idx;
    for (std::size_t i = 0; i < md.samples.size(); ++i) {
        if (!dilated_in_box(g, i, t)) continue;
        decode_index(g, i, idx);
        std::vector<double> p(static_cast<std::size_t>(g.dim));
        for (int d = 0; d < g.dim; ++d)
            p[static_cast<std::size_t>(d)] = 2.0 * t * g.xi(idx[static_cast<std::size_t>(d)]);
        pts.push_back(std::move(p));
        in_idx.push_back(i);
    }

    Field u = free_propagate(f, t);
    std::vector<complex> interp = trig_interpolate(u, pts);

    double worst = 0;
    for (std::size_t q = 0; q < in_idx.size(); ++q)
        worst = std::max(worst, std::abs(interp[q] - md.samples[in_idx[q]]));
    return worst;
}

double dispersive_ratio(const Field& f, double t) {
    if (!(t > 0)) throw std::invalid_argument("dispersive_ratio: t must be positive");
    double l1 = norm(f, NormSpec::L1());
    if (l1 == 0) throw std::invalid_argument("dispersive_ratio: zero field");
    Field u = free_propagate(f, t);
    double linf = norm(u, NormSpec::Linf());
    return linf * std::pow(4.0 * M_PI * t, 0.5 * f.grid.dim) / l1;
}

}  // namespace dnlslab
