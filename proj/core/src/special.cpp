#include "opexp/special.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "opexp/errors.hpp"

namespace opexp {

namespace {

void require_domain(int k, double x, const char* where)
{
    if (k < 0) {
        throw OutOfRange(std::string(where) + ": order must be >= 0");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw OutOfRange(std::string(where) + ": argument must be finite and >= 0");
    }
}

} // namespace

double log_bessel_i(int k, double x)
{
    require_domain(k, x, "log_bessel_i");
    if (x == 0.0) {
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    // Log-domain term recurrence; terms rise until n ~ x/2 then fall.
    const double log_half_sq = 2.0 * std::log(0.5 * x);
    const double kd = static_cast<double>(k);
    double log_term = kd * std::log(0.5 * x) - std::lgamma(kd + 1.0);
    std::vector<double> logs;
    logs.reserve(64);
    double log_max = log_term;
    for (int n = 0;; ++n) {
        logs.push_back(log_term);
        log_max = std::max(log_max, log_term);
        const double nd = static_cast<double>(n);
        const double step = log_half_sq - std::log(nd + 1.0) - std::log(kd + nd + 1.0);
        // Stop once terms are decreasing and negligible relative to the peak.
        if (step < 0.0 && log_term - log_max < std::log(1e-17)) {
            break;
        }
        log_term += step;
        if (n > 1000000) {
            throw SeriesError("log_bessel_i: series failed to converge");
        }
    }
    double sum = 0.0;
    for (double l : logs) {
        sum += std::exp(l - log_max);
    }
    return log_max + std::log(sum);
}

double bessel_i(int k, double x)
{
    require_domain(k, x, "bessel_i");
    if (x > kBesselMaxArgument) {
        throw RangeError("bessel_i: argument " + std::to_string(x) + " exceeds overflow guard " +
                         std::to_string(kBesselMaxArgument));
    }
    if (x == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    return std::exp(log_bessel_i(k, x));
}

} // namespace opexp
