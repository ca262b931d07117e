#include "merws/gof.hpp"

#include <algorithm>
#include <cmath>

#include "merws/errors.hpp"

namespace merws {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Lower regularized gamma by its power series (x < s+1).
double gamma_p_series(double s, double x) {
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int i = 0; i < 2000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw Error("incomplete gamma series failed to converge");
}

// Upper regularized gamma by Lentz's continued fraction (x >= s+1).
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 2000; ++i) {
        const double an = -double(i) * (double(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw Error("incomplete gamma continued fraction failed to converge");
}

} // namespace

double regularized_gamma_q(double s, double x) {
    if (!(s > 0.0) || x < 0.0)
        throw NonPositiveArgument("regularized_gamma_q requires s > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_cf(s, x);
}

double chi_square_pvalue(double stat, double dof) {
    return regularized_gamma_q(0.5 * dof, 0.5 * stat);
}

double chi_square_stat(std::span<const double> observed, std::span<const double> expected) {
    if (observed.size() != expected.size())
        throw DimensionMismatch("chi_square_stat: length mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
    }
    return stat;
}

double ks_one_sample(std::span<const double> sorted_sample,
                     const std::function<double(double)>& cdf) {
    const double n = double(sorted_sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        const double f = cdf(sorted_sample[i]);
        d = std::max(d, std::max(double(i + 1) / n - f, f - double(i) / n));
    }
    return d;
}

double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b) {
    const double na = double(sorted_a.size());
    const double nb = double(sorted_b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sorted_a.size() && j < sorted_b.size()) {
        const double xa = sorted_a[i];
        const double xb = sorted_b[j];
        if (xa <= xb) ++i;
        if (xb <= xa) ++j;
        d = std::max(d, std::fabs(double(i) / na - double(j) / nb));
    }
    return d;
}

double ks_pvalue(double stat, double n_eff) {
    const double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * stat;
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * double(j) * double(j) * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

MeanSE mean_and_se(std::span<const double> sample) {
    MeanSE out;
    out.n = sample.size();
    if (out.n == 0) return out;
    long double sum = 0.0L;
    for (double x : sample) sum += x;
    out.mean = double(sum / (long double)(out.n));
    if (out.n < 2) return out;
    long double ss = 0.0L;
    for (double x : sample) {
        const long double d = x - out.mean;
        ss += d * d;
    }
    const double var = double(ss / (long double)(out.n - 1));
    out.se = std::sqrt(var / double(out.n));
    return out;
}

double sample_variance(std::span<const double> sample) {
    const auto ms = mean_and_se(sample);
    return ms.se * ms.se * double(ms.n);
}

KurtosisEstimate excess_kurtosis(std::span<const double> sample) {
    const std::size_t n = sample.size();
    KurtosisEstimate out;
    if (n < 5) return out;

    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (double x : sample) {
        const long double x2 = (long double)x * x;
        s1 += x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
    }
    const auto kurt_from_sums = [](long double s1, long double s2, long double s3,
                                   long double s4, long double m) {
        const long double mu = s1 / m;
        const long double m2 = s2 / m - mu * mu;
        const long double m4 =
            s4 / m - 4.0L * mu * s3 / m + 6.0L * mu * mu * s2 / m - 3.0L * mu * mu * mu * mu;
        return double(m4 / (m2 * m2) - 3.0L);
    };
    out.excess = kurt_from_sums(s1, s2, s3, s4, (long double)n);

    // leave-one-out jackknife
    long double mean_loo = 0.0L;
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double x = sample[i];
        const long double x2 = x * x;
        loo[i] = kurt_from_sums(s1 - x, s2 - x2, s3 - x2 * x, s4 - x2 * x2,
                                (long double)(n - 1));
        mean_loo += loo[i];
    }
    mean_loo /= (long double)n;
    long double ss = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = loo[i] - mean_loo;
        ss += d * d;
    }
    out.se = double(std::sqrt((long double)(n - 1) / (long double)n * ss));
    return out;
}

} // namespace merws
