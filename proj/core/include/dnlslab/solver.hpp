#pragma once

#include <map>
#include <string>
#include <vector>

#include "dnlslab/grid.hpp"
#include "dnlslab/modspace.hpp"

namespace dnlslab {

/// Defining constants of i u_t + Δu + i a u = mu |u|^{p-1} u plus the
/// decay-margin epsilon of the M^{1,1} assumption.
struct ModelParams {
    int dim = 1;
    double power = 3;    // p > 1
    double damping = 1;  // a > 0
    int sign = +1;       // mu
    double margin = 0;   // epsilon >= 0

    double gauge_rate() const { return damping * (power - 1); }  // a(p-1)
};

enum class Mode { M11, Sigma };

/// Check the theorem hypotheses for the requested mode: M11 needs an odd
/// integer power, Sigma needs odd or p > [n/2]+1. Throws on violation.
void validate_params(const ModelParams& p, Mode mode);

struct SimOptions {
    double T = 1;
    double dt = 1e-3;
    double monitor_cadence = 0.1;  // must be a multiple of dt
    bool keep_states = true;       // store v at the cadence
    bool track_increments = true;  // pullback-frame Duhamel increments
    bool track_m11 = false;        // the M^{1,1} monitor is costly
    WindowSpec m11_window = WindowSpec::gaussian(1.0);
    TFLattice m11_lattice{1.0, 0.0, -1, -1};
};

/// Time-indexed record of the gauged solution v(t) = e^{at} u(t) with the
/// monitored scalar series. The discrete flow conserves ||v||_L2 exactly.
struct Trajectory {
    ModelParams params;
    Grid grid;
    std::vector<double> times;   // cadence times, starting at 0
    std::vector<Field> states;   // v at cadence (physical space)
    std::map<std::string, std::vector<double>> monitors;
    // Per cadence block: sum of frequency-space pullback increments
    // e^{+i|xi|^2 s} F[(nonlinear substep - 1) w] over the block's steps.
    // Suffix sums give v(t) - e^{itΔ}phi without O(||v||) cancellation.
    std::vector<std::vector<complex>> increment_blocks;
    double aborted_at = -1;  // >= 0: blow-up, last good time
};

/// One Strang step for the gauged equation: half kinetic multiplier,
/// exact nonlinear phase with W = int_t^{t+dt} e^{-a(p-1)s} ds in closed
/// form, half kinetic multiplier. Preserves ||v||_L2 to machine precision.
Field strang_step(const Field& v, double t, double dt, const ModelParams& params);

Trajectory simulate(const Field& u0, const ModelParams& params, const SimOptions& opt);

struct DecayReport {
    Mode mode;
    std::vector<double> times;
    std::vector<double> envelope_ratio;  // monitor / theoretical envelope
    double sup = 0;
    double second_half_growth = 0;  // sup(2nd half)/sup(1st half) - 1, clamped at 0
};

/// Ratio of the decay monitor to its theoretical envelope:
/// M11: ||u||_M11 * e^{((ap+eps)/(2p-1)) t}; Sigma: ||e^{-itΔ}u||_Sigma * e^{at}.
DecayReport decay_check(const Trajectory& traj, Mode mode);

}  // namespace dnlslab
