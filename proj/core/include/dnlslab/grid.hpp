#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dnlslab {

using complex = std::complex<double>;

enum class Space { physical, frequency };

/// Periodic uniform grid on [-L/2, L/2)^n with its dual frequency lattice.
/// Sample points are x_j = -L/2 + j*dx, dual points xi_k = k*dxi with
/// k in [-N/2, N/2). dx * dxi * N = 2*pi per axis.
struct Grid {
    int dim = 1;
    int points = 0;     // N, per axis
    double length = 0;  // L, per axis

    double spacing() const { return length / points; }
    double dual_spacing() const { return 2.0 * M_PI / length; }
    double xi_max() const { return (points / 2) * dual_spacing(); }

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(points);
        return s;
    }

    double x(int j) const { return -0.5 * length + j * spacing(); }

    // FFT storage order per axis: m in [0, N) maps to wave number
    // k = m for m < N/2 and k = m - N otherwise.
    int wave_number(int m) const { return m < points / 2 ? m : m - points; }
    double xi(int m) const { return wave_number(m) * dual_spacing(); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

Grid inline make_grid(int dim, int points, double length, int max_dim = 3) {
    if (dim < 1) throw std::invalid_argument("make_grid: dimension must be >= 1");
    if (dim > max_dim) throw std::invalid_argument("make_grid: dimension exceeds cap");
    if (points < 4 || points % 2 != 0)
        throw std::invalid_argument("make_grid: points per axis must be even and >= 4");
    if (!(length > 0)) throw std::invalid_argument("make_grid: box length must be positive");
    return Grid{dim, points, length};
}

/// Complex samples on a Grid, tagged with the space they live in.
/// Samples are flattened row-major (last axis fastest), matching FFTW.
struct Field {
    Grid grid;
    Space space = Space::physical;
    std::vector<complex> samples;
};

inline Field zero_field(const Grid& g, Space space = Space::physical) {
    return Field{g, space, std::vector<complex>(g.size())};
}

/// Decode a flat index into per-axis indices (row-major, last axis fastest).
inline void decode_index(const Grid& g, std::size_t flat, std::array<int, 3>& idx) {
    for (int d = g.dim - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % g.points);
        flat /= g.points;
    }
}

inline bool all_finite(const Field& f) {
    for (const auto& z : f.samples)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace dnlslab
