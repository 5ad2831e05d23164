#include "dnlslab/norms.hpp"

#include <algorithm>
#include <stdexcept>

#include "dnlslab/fourier.hpp"

namespace dnlslab {

namespace {

double weighted_l2(const Field& f, int s, bool weight_by_xi) {
    // ||<w>^s f||_L2 with w either the frequency or the position variable.
    const Grid& g = f.grid;
    const double cell = weight_by_xi || f.space == Space::frequency
                            ? std::pow(g.dual_spacing(), g.dim)
                            : std::pow(g.spacing(), g.dim);
    std::array<int, 3> idx{};
    double acc = 0;
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        double w = 1.0;
        if (s != 0) {
            decode_index(g, i, idx);
            double r2 = 0;
            for (int d = 0; d < g.dim; ++d) {
                double c = weight_by_xi ? g.xi(idx[static_cast<std::size_t>(d)])
                                        : g.x(idx[static_cast<std::size_t>(d)]);
                r2 += c * c;
            }
            w = std::pow(1.0 + r2, s);
        }
        acc += w * std::norm(f.samples[i]);
    }
    return std::sqrt(cell * acc);
}

}  // namespace

double norm(const Field& f, const NormSpec& spec) {
    const Grid& g = f.grid;
    if (f.samples.size() != g.size()) throw std::invalid_argument("norm: sample count mismatch");
    const double cell = f.space == Space::physical ? std::pow(g.spacing(), g.dim)
                                                   : std::pow(g.dual_spacing(), g.dim);
    switch (spec.kind) {
        case NormKind::L1: {
            double acc = 0;
            for (const auto& z : f.samples) acc += std::abs(z);
            return cell * acc;
        }
        case NormKind::L2: {
            double acc = 0;
            for (const auto& z : f.samples) acc += std::norm(z);
            return std::sqrt(cell * acc);
        }
        case NormKind::Linf: {
            double m = 0;
            for (const auto& z : f.samples) m = std::max(m, std::abs(z));
            return m;
        }
        case NormKind::Hs: {
            if (spec.s < 0) throw std::invalid_argument("norm: negative Sobolev order");
            if (f.space == Space::frequency) return weighted_l2(f, spec.s, true);
            Field fhat = fourier_transform(f, Direction::forward);
            return weighted_l2(fhat, spec.s, true);
        }
        case NormKind::FHs: {
            if (spec.s < 0) throw std::invalid_argument("norm: negative weight order");
            if (f.space == Space::physical) return weighted_l2(f, spec.s, false);
            Field phys = fourier_transform(f, Direction::inverse);
            return weighted_l2(phys, spec.s, false);
        }
        case NormKind::Sigma: {
            int s = sigma_order(g.dim);
            return std::max(norm(f, NormSpec::Hs(s)), norm(f, NormSpec::FHs(s)));
        }
    }
    throw std::logic_error("norm: unreachable");
}

}  // namespace dnlslab
