#include "dnlslab/modspace.hpp"

#include <cmath>
#include <stdexcept>

#include "dnlslab/fourier.hpp"
#include "dnlslab/norms.hpp"

namespace dnlslab {

namespace {

double bump_profile(double u) {
    // exp(-1/(1-u^2)) on |u| < 1, identically zero outside.
    if (std::fabs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

void normalize_l2(Field& f) {
    double n = norm(f, NormSpec::L2());
    if (n == 0) throw std::runtime_error("window_field: degenerate window");
    for (auto& z : f.samples) z /= n;
}

}  // namespace

Field window_field(const WindowSpec& w, const Grid& g) {
    Field out = zero_field(g, Space::physical);
    std::array<int, 3> idx{};
    if (w.shape == WindowSpec::Shape::gaussian) {
        if (!(w.param > 0)) throw std::invalid_argument("window_field: sigma must be positive");
        for (std::size_t i = 0; i < out.samples.size(); ++i) {
            decode_index(g, i, idx);
            double r2 = 0;
            for (int d = 0; d < g.dim; ++d) {
                double x = g.x(idx[static_cast<std::size_t>(d)]);
                r2 += x * x;
            }
            out.samples[i] = std::exp(-r2 / (2.0 * w.param * w.param));
        }
    } else {
        if (!(w.param > 0)) throw std::invalid_argument("window_field: radius must be positive");
        if (w.param >= g.xi_max())
            throw std::invalid_argument("window_field: bump radius exceeds the dual grid");
        Field hat = zero_field(g, Space::frequency);
        for (std::size_t i = 0; i < hat.samples.size(); ++i) {
            decode_index(g, i, idx);
            double r2 = 0;
            for (int d = 0; d < g.dim; ++d) {
                double xi = g.xi(idx[static_cast<std::size_t>(d)]);
                r2 += xi * xi;
            }
            hat.samples[i] = bump_profile(std::sqrt(r2) / w.param);
        }
        out = fourier_transform(hat, Direction::inverse);
    }
    normalize_l2(out);
    return out;
}

double m11_norm(const Field& f, const WindowSpec& w, const TFLattice& lat) {
    if (f.space != Space::physical)
        throw std::invalid_argument("m11_norm: needs a physical-space field");
    const Grid& g = f.grid;
    const double dx = g.spacing(), dxi = g.dual_spacing();

    const int x_cells = std::max(1, static_cast<int>(std::lround(lat.x_step / dx)));
    const int xi_stride =
        lat.xi_step <= 0 ? 1 : std::max(1, static_cast<int>(std::lround(lat.xi_step / dxi)));
    const double x_extent = lat.x_extent <= 0 ? 0.5 * g.length : lat.x_extent;
    const double xi_extent = lat.xi_extent <= 0 ? g.xi_max() : lat.xi_extent;

    // Coverage: the lattice must hold essentially all of f, in both
    // position and frequency (relative energy outside below 1e-8).
    Field fhat = fourier_transform(f, Direction::forward);
    std::array<int, 3> idx{};
    double tot_x = 0, out_x = 0, tot_xi = 0, out_xi = 0;
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        decode_index(g, i, idx);
        double ex = std::norm(f.samples[i]);
        double exi = std::norm(fhat.samples[i]);
        tot_x += ex;
        tot_xi += exi;
        for (int d = 0; d < g.dim; ++d) {
            std::size_t dd = static_cast<std::size_t>(d);
            if (std::fabs(g.x(idx[dd])) > x_extent) { out_x += ex; break; }
        }
        for (int d = 0; d < g.dim; ++d) {
            std::size_t dd = static_cast<std::size_t>(d);
            if (std::fabs(g.xi(idx[dd])) > xi_extent) { out_xi += exi; break; }
        }
    }
    if (tot_x == 0) return 0.0;
    if (out_x > 1e-8 * tot_x || out_xi > 1e-8 * tot_xi)
        throw std::runtime_error("m11_norm: lattice does not cover the field's support");

    Field win = window_field(w, g);

    // Column centers per axis: multiples of x_cells*dx within the extent.
    const int half_cols = static_cast<int>(std::floor(x_extent / (x_cells * dx)));
    const int cols_per_axis = 2 * half_cols + 1;
    std::size_t n_cols = 1;
    for (int d = 0; d < g.dim; ++d) n_cols *= static_cast<std::size_t>(cols_per_axis);

    // The window is centered at x = 0; a column at center c (s cells)
    // reads the window at index (j - s) mod N, periodically wrapped.
    double acc = 0;
    std::vector<complex> hbuf(g.size());
    std::array<int, 3> cidx{};
    for (std::size_t c = 0; c < n_cols; ++c) {
        std::size_t rem = c;
        for (int d = g.dim - 1; d >= 0; --d) {
            cidx[static_cast<std::size_t>(d)] =
                (static_cast<int>(rem % cols_per_axis) - half_cols) * x_cells;
            rem /= cols_per_axis;
        }
        Field h{g, Space::physical, hbuf};
        for (std::size_t i = 0; i < f.samples.size(); ++i) {
            decode_index(g, i, idx);
            std::size_t wflat = 0;
            for (int d = 0; d < g.dim; ++d) {
                std::size_t dd = static_cast<std::size_t>(d);
                int j = idx[dd] - cidx[dd];  // window translated by the column center
                j = ((j % g.points) + g.points) % g.points;
                wflat = wflat * static_cast<std::size_t>(g.points) + static_cast<std::size_t>(j);
            }
            h.samples[i] = std::conj(win.samples[wflat]) * f.samples[i];
        }
        Field V = fourier_transform(h, Direction::forward);
        for (std::size_t i = 0; i < V.samples.size(); ++i) {
            decode_index(g, i, idx);
            bool keep = true;
            for (int d = 0; d < g.dim && keep; ++d) {
                std::size_t dd = static_cast<std::size_t>(d);
                if (g.wave_number(idx[dd]) % xi_stride != 0 ||
                    std::fabs(g.xi(idx[dd])) > xi_extent)
                    keep = false;
            }
            if (keep) acc += std::abs(V.samples[i]);
        }
    }
    return acc * std::pow(x_cells * dx, g.dim) * std::pow(xi_stride * dxi, g.dim);
}

Field counterexample_field(int n_terms, const WindowSpec& bump, const Grid& g) {
    if (n_terms < 0) throw std::invalid_argument("counterexample_field: negative term count");
    if (bump.shape != WindowSpec::Shape::band_limited_bump || bump.param > 0.25 + 1e-12)
        throw std::invalid_argument(
            "counterexample_field: needs the band-limited bump of radius <= 1/4");
    if (g.xi_max() < n_terms + 1)
        throw std::invalid_argument("counterexample_field: grid too coarse for the modulations");
    double cycles = g.length / (2.0 * M_PI);
    if (std::fabs(cycles - std::lround(cycles)) > 1e-9)
        throw std::invalid_argument(
            "counterexample_field: box length must be a multiple of 2*pi");

    Field out = zero_field(g, Space::physical);
    if (n_terms == 0) return out;

    Field phi = window_field(bump, g);
    std::array<int, 3> idx{};
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        decode_index(g, i, idx);
        double x1 = g.x(idx[0]);
        complex mod = 0;
        for (int k = 1; k <= n_terms; ++k)
            mod += std::pow(static_cast<double>(k), -1.5) * std::polar(1.0, k * x1);
        out.samples[i] = phi.samples[i] * mod;
    }
    return out;
}

double xi1_moment_sq(const Field& f) {
    if (f.space != Space::physical)
        throw std::invalid_argument("xi1_moment_sq: needs a physical-space field");
    const Grid& g = f.grid;
    Field fhat = fourier_transform(f, Direction::forward);
    std::array<int, 3> idx{};
    double acc = 0;
    for (std::size_t i = 0; i < fhat.samples.size(); ++i) {
        decode_index(g, i, idx);
        double xi1 = g.xi(idx[0]);
        acc += xi1 * xi1 * std::norm(fhat.samples[i]);
    }
    return acc * std::pow(g.dual_spacing(), g.dim);
}

double kato_ponce_ratio(const Field& u, double p, int s) {
    double linf = norm(u, NormSpec::Linf());
    if (linf == 0) throw std::invalid_argument("kato_ponce_ratio: zero field");
    Field fu = u;
    for (auto& z : fu.samples) z *= std::pow(std::abs(z), p - 1.0);
    return norm(fu, NormSpec::Hs(s)) / (std::pow(linf, p - 1.0) * norm(u, NormSpec::Hs(s)));
}

}  // namespace dnlslab
