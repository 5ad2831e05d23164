#pragma once

#include "dnlslab/grid.hpp"

namespace dnlslab {

enum class NormKind { L1, L2, Linf, Hs, FHs, Sigma };

/// Norm selector. For Hs/FHs, `s` is the (nonnegative integer) order.
/// Sigma is max(H^s, FH^s) with s = [n/2]+1, fixed by the grid dimension.
struct NormSpec {
    NormKind kind = NormKind::L2;
    int s = 0;

    static NormSpec L1() { return {NormKind::L1, 0}; }
    static NormSpec L2() { return {NormKind::L2, 0}; }
    static NormSpec Linf() { return {NormKind::Linf, 0}; }
    static NormSpec Hs(int s) { return {NormKind::Hs, s}; }
    static NormSpec FHs(int s) { return {NormKind::FHs, s}; }
    static NormSpec Sigma() { return {NormKind::Sigma, 0}; }
};

/// Sobolev order [n/2]+1 used by the Sigma space.
inline int sigma_order(int dim) { return dim / 2 + 1; }

/// Discretized norm: L1/L2 are Riemann sums with weight dx^n (dxi^n for
/// frequency-space fields), Linf is the max modulus, H^s goes through the
/// frequency side as ||<xi>^s fhat||_L2 and FH^s as ||<x>^s f||_L2.
double norm(const Field& f, const NormSpec& spec);

}  // namespace dnlslab
