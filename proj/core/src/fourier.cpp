#include "dnlslab/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace dnlslab {

namespace {

// FFTW planning is not thread safe; executing a plan on new arrays is.
// Plans are created once per (dim, points, sign) with FFTW_ESTIMATE and
// FFTW_UNALIGNED so they can run on any caller buffer.
class PlanCache {
  public:
    static fftw_plan get(int dim, int points, int sign) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        auto key = std::make_tuple(dim, points, sign);
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;

        std::size_t total = 1;
        for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(points);
        std::vector<complex> scratch(total);
        std::vector<int> dims(static_cast<std::size_t>(dim), points);
        fftw_plan plan = fftw_plan_dft(
            dim, dims.data(), reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw_plan_dft failed");
        cache.plans_.emplace(key, plan);
        return plan;
    }

  private:
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
    std::mutex mutex_;
};

// Parity (-1)^{sum_d k_d} of the wave-number multi-index; equals the
// parity of the storage multi-index since N is even.
inline double parity(const Grid& g, std::size_t flat) {
    int sum = 0;
    for (int d = 0; d < g.dim; ++d) {
        sum += static_cast<int>(flat % g.points);
        flat /= g.points;
    }
    return (sum & 1) ? -1.0 : 1.0;
}

}  // namespace

Field fourier_transform(const Field& f, Direction dir) {
    const Grid& g = f.grid;
    if (f.samples.size() != g.size())
        throw std::invalid_argument("fourier_transform: sample count mismatch");
    if (dir == Direction::forward && f.space != Space::physical)
        throw std::invalid_argument("fourier_transform: forward needs a physical-space field");
    if (dir == Direction::inverse && f.space != Space::frequency)
        throw std::invalid_argument("fourier_transform: inverse needs a frequency-space field");

    const double two_pi_pow = std::pow(2.0 * M_PI, -0.5 * g.dim);
    Field out;
    out.grid = g;
    out.samples.resize(g.size());

    if (dir == Direction::forward) {
        // fhat(xi_k) = (2pi)^{-n/2} dx^n (-1)^{sum k_d} DFT[f]_k,
        // the (-1)^k carrying the -L/2 grid offset.
        fftw_plan plan = PlanCache::get(g.dim, g.points, FFTW_FORWARD);
        std::vector<complex> buf(f.samples);
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                         reinterpret_cast<fftw_complex*>(out.samples.data()));
        const double scale = two_pi_pow * std::pow(g.spacing(), g.dim);
        for (std::size_t i = 0; i < out.samples.size(); ++i)
            out.samples[i] *= scale * parity(g, i);
        out.space = Space::frequency;
    } else {
        // f(x_j) = (2pi)^{-n/2} dxi^n IDFT[(-1)^k fhat]_j (unnormalized
        // backward transform; dx dxi N = 2pi makes the round trip exact).
        fftw_plan plan = PlanCache::get(g.dim, g.points, FFTW_BACKWARD);
        std::vector<complex> buf(f.samples);
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= parity(g, i);
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                         reinterpret_cast<fftw_complex*>(out.samples.data()));
        const double scale = two_pi_pow * std::pow(g.dual_spacing(), g.dim);
        for (auto& z : out.samples) z *= scale;
        out.space = Space::physical;
    }
    return out;
}

std::vector<complex> trig_interpolate(const Field& f,
                                      const std::vector<std::vector<double>>& points) {
    const Grid& g = f.grid;
    Field fhat = f.space == Space::frequency ? f : fourier_transform(f, Direction::forward);
    const double scale =
        std::pow(2.0 * M_PI, -0.5 * g.dim) * std::pow(g.dual_spacing(), g.dim);

    std::vector<complex> out(points.size());
    std::array<int, 3> idx{};
    for (std::size_t q = 0; q < points.size(); ++q) {
        if (static_cast<int>(points[q].size()) != g.dim)
            throw std::invalid_argument("trig_interpolate: point dimension mismatch");
        complex acc = 0;
        for (std::size_t i = 0; i < fhat.samples.size(); ++i) {
            decode_index(g, i, idx);
            double phase = 0;
            for (int d = 0; d < g.dim; ++d)
                phase += points[q][static_cast<std::size_t>(d)] *
                         g.xi(idx[static_cast<std::size_t>(d)]);
            acc += fhat.samples[i] * std::polar(1.0, phase);
        }
        out[q] = scale * acc;
    }
    return out;
}

Field frequency_as_physical(const Field& f) {
    if (f.space != Space::frequency)
        throw std::invalid_argument("frequency_as_physical: needs a frequency-space field");
    const Grid& g = f.grid;
    Grid dual{g.dim, g.points, g.points * g.dual_spacing()};
    Field out = zero_field(dual, Space::physical);
    // Position index j on the dual grid corresponds to wave number
    // k = j - N/2, stored at m = k mod N.
    std::array<int, 3> idx{};
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        decode_index(g, i, idx);
        std::size_t flat = 0;
        for (int d = 0; d < g.dim; ++d) {
            int j = g.wave_number(idx[static_cast<std::size_t>(d)]) + g.points / 2;
            flat = flat * static_cast<std::size_t>(g.points) + static_cast<std::size_t>(j);
        }
        out.samples[flat] = f.samples[i];
    }
    return out;
}

}  // namespace dnlslab
