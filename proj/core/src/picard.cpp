#include "dnlslab/picard.hpp"

#include <cmath>
#include <stdexcept>

#include "dnlslab/fourier.hpp"
#include "dnlslab/norms.hpp"

namespace dnlslab {

namespace {

std::vector<double> xi_squared(const Grid& g) {
    std::vector<double> out(g.size());
    std::array<int, 3> idx{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        decode_index(g, i, idx);
        double r2 = 0;
        for (int d = 0; d < g.dim; ++d) {
            double xi = g.xi(idx[static_cast<std::size_t>(d)]);
            r2 += xi * xi;
        }
        out[i] = r2;
    }
    return out;
}

}  // namespace

PicardReport picard_iterate(const Field& u0, const ModelParams& params,
                            const PicardOptions& opt) {
    if (u0.space != Space::physical)
        throw std::invalid_argument("picard_iterate: initial data must be physical-space");
    if (u0.grid.dim != params.dim)
        throw std::invalid_argument("picard_iterate: grid/model dimension mismatch");
    if (opt.iterations < 2) throw std::invalid_argument("picard_iterate: needs K >= 2");
    if (!(opt.dt > 0) || !(opt.T > 0) || opt.eval_stride < 1)
        throw std::invalid_argument("picard_iterate: bad quadrature options");

    const Grid& g = u0.grid;
    const std::size_t n = g.size();
    const long nt = std::lround(opt.T / opt.dt);
    if (nt < 2 || std::fabs(nt * opt.dt - opt.T) > 1e-9 * opt.T)
        throw std::invalid_argument("picard_iterate: dt must divide the horizon");

    const std::vector<double> xi2 = xi_squared(g);
    const double pm1 = params.power - 1.0;
    const double c = params.gauge_rate();
    const double mu = params.sign;

    Field u0hat = fourier_transform(u0, Direction::forward);

    // e^{-c t} F(v(t)) in frequency space (without the coupling sign).
    auto gauged_nonlinearity = [&](const Field& v, double t) {
        Field w = v;
        const double damp = std::exp(-c * t);
        for (auto& z : w.samples) z *= damp * std::pow(std::abs(z), pm1);
        return fourier_transform(w, Direction::forward);
    };

    auto working_norm = [&](const Field& f) {
        if (opt.working_norm == PicardOptions::Norm::L2) return norm(f, NormSpec::L2());
        return m11_norm(f, opt.window, opt.lattice);
    };

    PicardReport rep;
    for (long j = 0; j <= nt; j += opt.eval_stride) rep.eval_times.push_back(j * opt.dt);
    if (std::lround(rep.eval_times.back() / opt.dt) != nt) rep.eval_times.push_back(opt.T);

    // v^{(0)}: the free evolution of the data.
    std::vector<Field> V(static_cast<std::size_t>(nt) + 1);
    for (long j = 0; j <= nt; ++j) {
        Field hat = u0hat;
        for (std::size_t i = 0; i < n; ++i)
            hat.samples[i] *= std::polar(1.0, -j * opt.dt * xi2[i]);
        V[static_cast<std::size_t>(j)] = fourier_transform(hat, Direction::inverse);
    }
    rep.iterate_snapshots.push_back(V.back());

    for (int k = 0; k < opt.iterations; ++k) {
        std::vector<Field> Vn(static_cast<std::size_t>(nt) + 1);
        Vn[0] = u0;
        std::vector<complex> I(n);  // int_0^{t_j} e^{i(t_j - s)D} g(s) ds, frequency side
        Field G_prev = gauged_nonlinearity(V[0], 0.0);
        for (long j = 1; j <= nt; ++j) {
            const double t = j * opt.dt;
            Field G_cur = gauged_nonlinearity(V[static_cast<std::size_t>(j)], t);
            for (std::size_t i = 0; i < n; ++i) {
                I[i] = (I[i] + 0.5 * opt.dt * G_prev.samples[i]) *
                           std::polar(1.0, -opt.dt * xi2[i]) +
                       0.5 * opt.dt * G_cur.samples[i];
            }
            Field hat = zero_field(g, Space::frequency);
            for (std::size_t i = 0; i < n; ++i)
                hat.samples[i] = std::polar(1.0, -t * xi2[i]) * u0hat.samples[i] -
                                 complex(0.0, mu) * I[i];
            Vn[static_cast<std::size_t>(j)] = fourier_transform(hat, Direction::inverse);
            G_prev = std::move(G_cur);
        }

        double res = 0;
        for (double t : rep.eval_times) {
            std::size_t j = static_cast<std::size_t>(std::lround(t / opt.dt));
            Field diff = Vn[j];
            for (std::size_t i = 0; i < n; ++i) diff.samples[i] -= V[j].samples[i];
            res = std::max(res,
                           std::pow(1.0 + t * t, -0.25 * g.dim) * working_norm(diff));
        }
        rep.residuals.push_back(res);
        V = std::move(Vn);
        rep.iterate_snapshots.push_back(V.back());
    }

    for (double t : rep.eval_times)
        rep.final_states.push_back(V[static_cast<std::size_t>(std::lround(t / opt.dt))]);

    // Geometric mean of consecutive residual ratios, skipping pairs that
    // have fallen to the quadrature noise floor.
    const double floor = 1e-10 * rep.residuals.front();
    double log_sum = 0;
    int pairs = 0;
    for (std::size_t k = 1; k < rep.residuals.size(); ++k) {
        if (rep.residuals[k] < floor || rep.residuals[k - 1] <= 0) continue;
        log_sum += std::log(rep.residuals[k] / rep.residuals[k - 1]);
        ++pairs;
    }
    rep.contraction_factor = pairs > 0 ? std::exp(log_sum / pairs) : 0.0;
    return rep;
}

}  // namespace dnlslab
