#include "dnlslab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dnlslab/fourier.hpp"
#include "dnlslab/propagators.hpp"
#include "dnlslab/special.hpp"

namespace dnlslab {

Field pullback_state(const Field& v, double t) {
    if (v.space != Space::physical)
        throw std::invalid_argument("pullback_state: needs a physical-space field");
    if (t == 0) return v;
    return free_propagate(v, -t);
}

ScatteringState extract_phi(const Trajectory& traj, Mode mode, const ExtractOptions& opt) {
    if (traj.states.size() != traj.times.size() || traj.states.empty())
        throw std::invalid_argument("extract_phi: trajectory must keep its states");
    if (traj.aborted_at >= 0)
        throw std::invalid_argument("extract_phi: trajectory aborted before the horizon");

    const double T = traj.times.back();
    if (!(T > 0)) throw std::invalid_argument("extract_phi: empty time range");
    std::size_t j_half = 0;
    double best = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        double d = std::fabs(traj.times[j] - 0.5 * T);
        if (d < best) { best = d; j_half = j; }
    }

    ScatteringState out;
    out.mode = mode;
    out.extraction_time = T;
    out.phi = pullback_state(traj.states.back(), T);

    Field phi_half = pullback_state(traj.states[j_half], traj.times[j_half]);
    Field diff = out.phi;
    for (std::size_t i = 0; i < diff.samples.size(); ++i)
        diff.samples[i] -= phi_half.samples[i];
    out.cauchy_gap = mode == Mode::M11 ? m11_norm(diff, opt.window, opt.lattice)
                                       : norm(diff, NormSpec::Sigma());
    if (out.cauchy_gap > opt.tol)
        throw std::runtime_error(
            "extract_phi: pullback not Cauchy at this horizon; integrate further");
    return out;
}

double tail_integral(double alpha, double beta, double t) {
    if (!(beta > 0) || !(t > 0))
        throw std::invalid_argument("tail_integral: needs beta > 0 and t > 0");
    return std::pow(beta, -(alpha + 1.0)) * upper_incomplete_gamma(alpha + 1.0, beta * t);
}

std::vector<double> elemlem_check(double alpha, double beta,
                                  const std::vector<double>& t_grid) {
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t > 0)) throw std::invalid_argument("elemlem_check: grid times must be positive");
        out.push_back(tail_integral(alpha, beta, t) /
                      (std::pow(t, alpha) * std::exp(-beta * t)));
    }
    return out;
}

double i2_norm(const Field& phi, double t, const ModelParams& params) {
    if (phi.space != Space::physical)
        throw std::invalid_argument("i2_norm: needs a physical-space profile");
    if (!(t > 0)) throw std::invalid_argument("i2_norm: t must be positive");
    const double c = params.gauge_rate();
    const double q = 0.5 * params.dim * (params.power - 1.0);
    const double weight = std::pow(2.0, -q) * tail_integral(-q, c, t);

    Field fhat = fourier_transform(phi, Direction::forward);
    double acc = 0;
    for (const auto& z : fhat.samples) acc += std::pow(std::norm(z), params.power);
    acc *= std::pow(phi.grid.dual_spacing(), phi.grid.dim);
    return weight * std::sqrt(acc);
}

ErrorCurve error_curve(const Trajectory& traj, const ScatteringState& phi,
                       const NormSpec& spec, double trusted_fraction) {
    if (spec.kind != NormKind::L2 && !(spec.kind == NormKind::Hs && spec.s == 1))
        throw std::invalid_argument("error_curve: norm must be L2 or H1");
    if (!(trusted_fraction > 0) || trusted_fraction > 1)
        throw std::invalid_argument("error_curve: trusted_fraction must lie in (0, 1]");
    const double t_max = trusted_fraction * phi.extraction_time;

    ErrorCurve curve;
    curve.spec = spec;

    if (!traj.increment_blocks.empty()) {
        if (traj.increment_blocks.size() + 1 != traj.times.size())
            throw std::invalid_argument("error_curve: increment blocks do not match cadence");
        std::vector<complex> suffix(traj.grid.size());
        std::vector<double> vals_desc, times_desc;
        for (std::size_t j = traj.increment_blocks.size(); j-- > 0;) {
            const auto& block = traj.increment_blocks[j];
            for (std::size_t i = 0; i < suffix.size(); ++i) suffix[i] += block[i];
            if (traj.times[j] <= t_max) {
                Field f{traj.grid, Space::frequency, suffix};
                vals_desc.push_back(norm(f, spec));
                times_desc.push_back(traj.times[j]);
            }
        }
        curve.times.assign(times_desc.rbegin(), times_desc.rend());
        curve.values.assign(vals_desc.rbegin(), vals_desc.rend());
        return curve;
    }

    if (traj.states.size() != traj.times.size())
        throw std::invalid_argument("error_curve: trajectory has neither increments nor states");
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        if (traj.times[j] > t_max) break;
        Field ref = traj.times[j] == 0 ? phi.phi : free_propagate(phi.phi, traj.times[j]);
        Field diff = traj.states[j];
        for (std::size_t i = 0; i < diff.samples.size(); ++i)
            diff.samples[i] -= ref.samples[i];
        curve.times.push_back(traj.times[j]);
        curve.values.push_back(norm(diff, spec));
    }
    return curve;
}

RateFit fit_rate(const ErrorCurve& curve, double t_lo, double t_hi) {
    if (!(t_lo > 0) || !(t_hi > t_lo))
        throw std::invalid_argument("fit_rate: needs 0 < t_lo < t_hi");
    std::vector<double> ts, ys;
    for (std::size_t j = 0; j < curve.times.size(); ++j) {
        double t = curve.times[j];
        if (t < t_lo || t > t_hi) continue;
        if (!(curve.values[j] > 0))
            throw std::invalid_argument("fit_rate: nonpositive error sample in the window");
        ts.push_back(t);
        ys.push_back(std::log(curve.values[j]));
    }
    if (ts.size() < 10)
        throw std::invalid_argument("fit_rate: fewer than 10 samples in the window");

    // Normal equations for log E = x0 - x1 log t - x2 t.
    double A[3][3] = {};
    double b[3] = {};
    for (std::size_t j = 0; j < ts.size(); ++j) {
        double phi_basis[3] = {1.0, -std::log(ts[j]), -ts[j]};
        for (int r = 0; r < 3; ++r) {
            b[r] += phi_basis[r] * ys[j];
            for (int col = 0; col < 3; ++col) A[r][col] += phi_basis[r] * phi_basis[col];
        }
    }
    // Gaussian elimination with partial pivoting.
    int perm[3] = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        int piv = k;
        for (int r = k + 1; r < 3; ++r)
            if (std::fabs(A[perm[r]][k]) > std::fabs(A[perm[piv]][k])) piv = r;
        std::swap(perm[k], perm[piv]);
        if (A[perm[k]][k] == 0) throw std::runtime_error("fit_rate: singular normal equations");
        for (int r = k + 1; r < 3; ++r) {
            double m = A[perm[r]][k] / A[perm[k]][k];
            for (int col = k; col < 3; ++col) A[perm[r]][col] -= m * A[perm[k]][col];
            b[perm[r]] -= m * b[perm[k]];
        }
    }
    double x[3];
    for (int k = 2; k >= 0; --k) {
        double s = b[perm[k]];
        for (int col = k + 1; col < 3; ++col) s -= A[perm[k]][col] * x[col];
        x[k] = s / A[perm[k]][k];
    }

    RateFit fit;
    fit.C = std::exp(x[0]);
    fit.gamma = x[1];
    fit.delta = x[2];
    fit.window_lo = t_lo;
    fit.window_hi = t_hi;
    double rss = 0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        double model = x[0] - x[1] * std::log(ts[j]) - x[2] * ts[j];
        rss += (ys[j] - model) * (ys[j] - model);
    }
    fit.residual = std::sqrt(rss / static_cast<double>(ts.size()));
    return fit;
}

}  // namespace dnlslab
