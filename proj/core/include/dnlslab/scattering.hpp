#pragma once

#include <vector>

#include "dnlslab/modspace.hpp"
#include "dnlslab/norms.hpp"
#include "dnlslab/solver.hpp"

namespace dnlslab {

/// e^{-itΔ} v(t): the pullback whose t -> infinity limit is the
/// scattering state.
Field pullback_state(const Field& v, double t);

struct ScatteringState {
    Field phi;
    double extraction_time = 0;
    double cauchy_gap = 0;  // ||phi_T - phi_{T/2}|| in the working norm
    Mode mode = Mode::M11;
};

struct ExtractOptions {
    double tol = 1e-6;
    WindowSpec window = WindowSpec::gaussian(1.0);  // for the M11 gap norm
    TFLattice lattice{1.0, 0.0, -1, -1};
};

/// Pullback at the final trajectory time with a Cauchy-gap certificate
/// against the pullback at half that time. Refuses (throws) when the gap
/// exceeds the tolerance; run longer in that case.
ScatteringState extract_phi(const Trajectory& traj, Mode mode, const ExtractOptions& opt);

/// int_t^infty s^alpha e^{-beta s} ds = beta^{-(alpha+1)} Gamma(alpha+1, beta t),
/// beta > 0, t > 0, via the continued-fraction upper incomplete gamma.
double tail_integral(double alpha, double beta, double t);

/// r(t) = tail_integral(alpha, beta, t) / (t^alpha e^{-beta t}); bounded
/// above and below on the tail and r(t) -> 1/beta as t -> infinity.
std::vector<double> elemlem_check(double alpha, double beta,
                                  const std::vector<double>& t_grid);

/// Exact norm of the leading asymptotic profile:
/// ||I2(t)||_L2 = (int_t^infty e^{-a(p-1)s} (2s)^{-n(p-1)/2} ds) * || |phihat|^p ||_L2.
/// The (2s) factor is the Jacobian of the L2-isometric dilation.
double i2_norm(const Field& phi, double t, const ModelParams& params);

struct ErrorCurve {
    std::vector<double> times;
    std::vector<double> values;  // E(t) = ||v(t) - e^{itΔ} phi||
    NormSpec spec;
};

/// E(t_j) in the requested norm (L2 or H1) at the monitor cadence,
/// restricted to t_j <= trusted_fraction * extraction_time. When the
/// trajectory carries pullback increments the curve is accumulated from
/// their suffix sums, which is the same quantity without the
/// O(||v||)-sized cancellation of a direct state subtraction.
ErrorCurve error_curve(const Trajectory& traj, const ScatteringState& phi,
                       const NormSpec& spec, double trusted_fraction = 0.5);

struct RateFit {
    double C = 0;
    double gamma = 0;
    double delta = 0;
    double residual = 0;  // RMS log-model misfit
    double window_lo = 0, window_hi = 0;
};

/// Least squares of log E(t) = log C - gamma log t - delta t over the
/// window. Needs >= 10 positive samples inside.
RateFit fit_rate(const ErrorCurve& curve, double t_lo, double t_hi);

}  // namespace dnlslab
