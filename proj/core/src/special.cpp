#include "dnlslab/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dnlslab {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;

// Regularized lower incomplete gamma by series, valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("incomplete gamma: series failed to converge");
}

// Continued fraction for Gamma(a, x) * e^x x^{-a} (modified Lentz),
// reliable for x >= a + 1 and also for a <= 0 once x is not small.
double upper_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return h * std::exp(-x + a * std::log(x));
    }
    throw std::runtime_error("incomplete gamma: continued fraction failed to converge");
}

// E1(x) = Gamma(0, x) for small x via the log series.
double e1_series(double x) {
    double sum = -kEulerGamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k <= kMaxIter; ++k) {
        term *= -x / k;
        double del = -term / k;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps + kEps) return sum;
    }
    throw std::runtime_error("incomplete gamma: E1 series failed to converge");
}

}  // namespace

double upper_incomplete_gamma(double a, double x) {
    if (x < 0 || !std::isfinite(x) || !std::isfinite(a))
        throw std::invalid_argument("upper_incomplete_gamma: needs finite a, x >= 0");
    if (x == 0) {
        if (a > 0) return std::tgamma(a);
        throw std::invalid_argument("upper_incomplete_gamma: diverges at x = 0 for a <= 0");
    }

    if (a > 0) {
        if (x < a + 1.0) return std::tgamma(a) * (1.0 - gamma_p_series(a, x));
        return upper_cf(a, x);
    }

    if (x >= 1.5) return upper_cf(a, x);

    // Small x, a <= 0: walk down from a positive order using
    // Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a, taking the E1
    // series when the recurrence passes through zero order.
    int steps = static_cast<int>(std::ceil(-a)) + 1;
    double a_top = a + steps;
    double value = a_top == 0 ? e1_series(x) : upper_incomplete_gamma(a_top, x);
    for (int i = steps; i >= 1; --i) {
        double ai = a + (i - 1);
        if (ai == 0) {
            value = e1_series(x);
        } else {
            value = (value - std::pow(x, ai) * std::exp(-x)) / ai;
        }
    }
    return value;
}

}  // namespace dnlslab
