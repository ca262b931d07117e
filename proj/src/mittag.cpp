#include "merws/mittag.hpp"

#include <quadmath.h>

#include <cmath>
#include <sstream>

#include "merws/coefficients.hpp"
#include "merws/errors.hpp"

namespace merws {

namespace {

void require_alpha(double alpha, bool allow_one) {
    const bool ok = allow_one ? (alpha > 0.0 && alpha <= 1.0) : (alpha > 0.0 && alpha < 1.0);
    if (!ok) {
        std::ostringstream os;
        os << "alpha must lie in (0,1" << (allow_one ? "]" : ")") << ", got " << alpha;
        throw OutOfEvaluationRange(os.str());
    }
}

// sin(pi * alpha * n) with the integer part of alpha*n removed exactly.
// alpha carries <= 53 mantissa bits and n <= 2^10, so alpha*n is exact in
// binary128; this keeps the sign pattern exact for rational alpha (e.g. the
// even-n zeros at alpha = 1/2).
__float128 sin_pi_mult(__float128 alpha_n) {
    const __float128 k = nearbyintq(alpha_n);
    const __float128 frac = alpha_n - k;
    __float128 s = sinq(M_PIq * frac);
    const long long ki = static_cast<long long>(k);
    return (ki & 1) ? -s : s;
}

} // namespace

double ml_function(double alpha, double t, double t_max) {
    require_alpha(alpha, true);
    if (!(std::fabs(t) <= t_max)) {
        std::ostringstream os;
        os << "E_alpha series evaluation uncertified for |t| > " << t_max << " (t = " << t << ")";
        throw OutOfEvaluationRange(os.str());
    }

    constexpr double kTailTol = 1e-12;
    constexpr int kMaxTerms = 200000;

    double sum = 0.0, comp = 0.0;
    const double log_abs_t = t == 0.0 ? 0.0 : std::log(std::fabs(t));
    double prev_ratio = HUGE_VAL;
    for (int n = 0; n < kMaxTerms; ++n) {
        double term;
        if (n == 0) {
            term = 1.0;
        } else if (t == 0.0) {
            break;
        } else {
            const double log_mag = n * log_abs_t - std::lgamma(1.0 + n * alpha);
            if (log_mag > 700.0)
                throw OutOfEvaluationRange("E_alpha series overflows double precision");
            term = std::exp(log_mag);
            if (t < 0.0 && (n & 1)) term = -term;
        }
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;

        // ratio of the next term's magnitude to this one; decreasing in n
        const double ratio =
            std::fabs(t) * std::exp(std::lgamma(1.0 + n * alpha) - std::lgamma(1.0 + (n + 1) * alpha));
        if (ratio < 1.0 && ratio <= prev_ratio) {
            const double next_mag = std::fabs(term) * ratio;
            if (next_mag / (1.0 - ratio) < kTailTol) return sum;
        }
        prev_ratio = ratio;
    }
    if (t == 0.0) return sum;
    throw OutOfEvaluationRange("E_alpha series failed to certify its tail");
}

double ml_pdf(double alpha, double x, double tol) {
    require_alpha(alpha, false);
    if (!(x > 0.0))
        throw OutOfEvaluationRange("ml_pdf requires x > 0");

    constexpr int kTermCap = 500;
    const __float128 qx = x;
    const __float128 log_x = logq(qx);
    const __float128 qalpha = alpha;

    __float128 sum = 0.0Q, comp = 0.0Q;
    __float128 abs_sum = 0.0Q;
    double trunc_bound = HUGE_VAL;
    double prev_ratio = HUGE_VAL;
    int n = 1;
    for (; n <= kTermCap; ++n) {
        const __float128 an = qalpha * n; // exact: 53-bit alpha times small integer
        const __float128 log_mag = lgammaq(1.0Q + an) + (n - 1) * log_x - lgammaq(__float128(n + 1));
        const __float128 mag = expq(log_mag);
        __float128 term = mag * sin_pi_mult(an);
        if (n % 2 == 0) term = -term; // (-x)^{n-1} sign

        const __float128 y = term - comp;
        const __float128 s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        abs_sum += mag;

        // next magnitude ratio: x * Gamma(1+alpha(n+1)) / (Gamma(1+alpha n) (n+1))
        const double ratio = static_cast<double>(
            qx * expq(lgammaq(1.0Q + qalpha * (n + 1)) - lgammaq(1.0Q + an)) / (n + 1));
        if (ratio < 1.0 && ratio <= prev_ratio) {
            trunc_bound = static_cast<double>(mag) * ratio / (1.0 - ratio);
            if (trunc_bound < 0.5 * tol) break;
        }
        prev_ratio = ratio;
    }

    const double round_bound = static_cast<double>(abs_sum) * 2.0 * double(n) * 1.93e-34;
    if (!(trunc_bound + round_bound < tol)) {
        std::ostringstream os;
        os << "ml_pdf series not certified to " << tol << " at alpha=" << alpha << ", x=" << x
           << " (truncation " << trunc_bound << ", round-off " << round_bound << ")";
        throw OutOfEvaluationRange(os.str());
    }

    double value = static_cast<double>(sum / (M_PIq * qalpha));
    if (value < 0.0) {
        // certified-error window around zero: clamp
        if (-value <= tol) return 0.0;
        throw OutOfEvaluationRange("ml_pdf produced a negative value beyond its certificate");
    }
    return value;
}

double ml_moment(double alpha, int m) {
    require_alpha(alpha, true);
    if (m < 0)
        throw OutOfEvaluationRange("ml_moment requires m >= 0");
    if (m == 0) return 1.0;
    return std::exp(log_gamma(double(m) + 1.0) - log_gamma(1.0 + double(m) * alpha));
}

double ml_sample(double alpha, RngStream& rng) {
    // Kanter: S = (K_alpha(pi U)/E)^{(1-alpha)/alpha} is one-sided stable;
    // ML = S^{-alpha} collapses to the closed form below.
    const double theta = M_PI * rng.uniform_open();
    const double e = rng.exponential();
    const double s1 = std::sin(theta);
    const double sa = std::sin(alpha * theta);
    const double sb = std::sin((1.0 - alpha) * theta);
    return std::pow(e, 1.0 - alpha) * s1 / (std::pow(sa, alpha) * std::pow(sb, 1.0 - alpha));
}

MLDistribution::MLDistribution(double alpha) : alpha_(alpha) {
    require_alpha(alpha, true);
}

} // namespace merws
