#pragma once

#include "dnlslab/grid.hpp"

namespace dnlslab {

/// e^{itΔ}f via the multiplier e^{-it|xi|^2} on the frequency side.
/// Exactly unitary on the grid for every t.
Field free_propagate(const Field& f, double t);

/// e^{itΔ}f sampled at the dilated points x = 2*t*xi_k (t > 0), computed
/// through the factorization e^{itΔ} = M(t) D(t) F M(t) with chirp
/// M(t) = e^{i|x|^2/(4t)}. The dilation prefactor uses the principal
/// branch, (2it)^{-n/2} = (2t)^{-n/2} e^{-i n pi/4} for t > 0.
struct DilatedField {
    Grid base_grid;
    double time = 0;
    std::vector<complex> samples;  // one per dual-grid point, FFT order

    double point(int m, int axis_ignored = 0) const {
        (void)axis_ignored;
        return 2.0 * time * base_grid.xi(m);
    }
};

DilatedField mdfm_propagate(const Field& f, double t);

/// Max discrepancy between the factorized propagator and the trigonometric
/// interpolation of the multiplier propagator at the in-box dilated points.
/// Throws if a non-negligible part of the dilated field escapes the box
/// (relative l2 mass above escape_tol) or if f is not band-limited.
double mdfm_consistency(const Field& f, double t, double escape_tol = 1e-8);

/// ||e^{itΔ}f||_Linf * (4 pi t)^{n/2} / ||f||_L1; at most 1 in the
/// continuum by the dispersive estimate, up to discretization slack.
double dispersive_ratio(const Field& f, double t);

}  // namespace dnlslab
