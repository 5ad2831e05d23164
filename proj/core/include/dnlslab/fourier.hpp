#pragma once

#include <vector>

#include "dnlslab/grid.hpp"

namespace dnlslab {

enum class Direction { forward, inverse };

/// Discrete analogue of the unitary Fourier transform with the
/// (2*pi)^{-n/2} constant: a continuum function sampled on the grid maps
/// to its continuum transform sampled on the dual grid (up to aliasing).
/// Forward requires a physical-space field, inverse a frequency-space one;
/// the round trip is the identity to machine precision.
Field fourier_transform(const Field& f, Direction dir);

/// Value of the band-limited (trigonometric) interpolant of a physical
/// periodic field at arbitrary points. `points` holds dim coordinates per
/// point. Exact for band-limited periodic data.
std::vector<complex> trig_interpolate(const Field& f,
                                      const std::vector<std::vector<double>>& points);

/// Reinterpret a frequency-space field as a physical field on the dual
/// grid (samples reordered to ascending xi, box length N*dxi).
Field frequency_as_physical(const Field& f);

}  // namespace dnlslab
