#pragma once

#include <vector>

#include "dnlslab/modspace.hpp"
#include "dnlslab/solver.hpp"

namespace dnlslab {

struct PicardOptions {
    int iterations = 6;  // K >= 2
    double T = 8;
    double dt = 0.01;     // trapezoidal quadrature step of the Duhamel integral
    int eval_stride = 10; // residual norm evaluated every this many nodes
    enum class Norm { L2, M11 } working_norm = Norm::M11;
    WindowSpec window = WindowSpec::gaussian(1.0);
    TFLattice lattice{2.0, 0.0, -1, -1};
};

/// Iterates of Phi(v) = e^{itΔ}u0 - i int_0^t e^{-a(p-1)s} e^{i(t-s)Δ} F(v(s)) ds
/// with residuals in the weighted-in-time norm sup_t <t>^{-n/2} ||.||.
struct PicardReport {
    std::vector<double> residuals;       // ||v^{k+1} - v^{k}||_X, k = 0..K-1
    double contraction_factor = 0;       // fitted geometric ratio (recorded even if > 1)
    std::vector<Field> iterate_snapshots;  // v^{(k)} at t = T
    std::vector<double> eval_times;
    std::vector<Field> final_states;     // last iterate at the eval nodes
};

PicardReport picard_iterate(const Field& u0, const ModelParams& params,
                            const PicardOptions& opt);

}  // namespace dnlslab
