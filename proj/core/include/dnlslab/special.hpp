#pragma once

namespace dnlslab {

/// Non-normalized upper incomplete gamma Gamma(a, x) for x > 0 and any
/// real a (x = 0 allowed when a > 0). Series for small x, continued
/// fraction (modified Lentz) for large x; nonpositive a is reached by
/// downward recurrence, with the E1 log series covering a = 0 at small x.
double upper_incomplete_gamma(double a, double x);

}  // namespace dnlslab
