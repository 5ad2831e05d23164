#pragma once

#include "dnlslab/grid.hpp"

namespace dnlslab {

/// STFT analysis window, normalized to unit L2 on the grid.
struct WindowSpec {
    enum class Shape { gaussian, band_limited_bump };
    Shape shape = Shape::gaussian;
    double param = 1.0;  // sigma for gaussian, frequency radius for the bump

    static WindowSpec gaussian(double sigma = 1.0) { return {Shape::gaussian, sigma}; }
    static WindowSpec bump(double radius) { return {Shape::band_limited_bump, radius}; }
};

/// The window as a grid field, centered, unit L2. The bump window is the
/// smooth compactly supported profile exp(-1/(1-(|xi|/r)^2)) on |xi| < r,
/// brought to physical space; its Fourier support lies inside the radius.
Field window_field(const WindowSpec& w, const Grid& g);

/// Time-frequency lattice for the phase-space Riemann sum. Steps are
/// snapped to multiples of the grid spacings. Nonpositive extents mean
/// "cover everything the grid holds".
struct TFLattice {
    double x_step = 1.0;
    double xi_step = 0.0;   // <= 0: dual grid spacing
    double x_extent = -1;   // <= 0: L/2
    double xi_extent = -1;  // <= 0: xi_max
};

/// M^{1,1} norm estimate: Riemann sum of |V_g f(x,xi)| over the lattice,
/// one windowed transform per lattice column. Throws if the lattice does
/// not cover the essential time-frequency support of f (energy outside
/// above 1e-8 of the total).
double m11_norm(const Field& f, const WindowSpec& w, const TFLattice& lat);

/// Partial sum f_N(x) = phi(x) * sum_{k=1..N} k^{-3/2} e^{i k x_1} with
/// phi the band-limited bump of radius 1/4; the family whose M^{1,1}
/// norms stay bounded while the H^1 norms diverge logarithmically.
/// Requires xi_max >= N+1 and a box length that is a multiple of 2*pi
/// (so the modulations are exact dual-lattice shifts).
Field counterexample_field(int n_terms, const WindowSpec& bump, const Grid& g);

/// ||xi_1 fhat||_L2^2 on the frequency grid.
double xi1_moment_sq(const Field& f);

/// ||F(u)||_{H^s} / (||u||_Linf^{p-1} ||u||_{H^s}) with F(u) = |u|^{p-1}u.
double kato_ponce_ratio(const Field& u, double p, int s);

}  // namespace dnlslab
