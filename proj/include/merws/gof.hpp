#ifndef MERWS_GOF_HPP
#define MERWS_GOF_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace merws {

double normal_cdf(double x);

// Regularized incomplete gamma Q(s, x) = Gamma(s,x)/Gamma(s), s > 0, x >= 0.
// Series for x < s+1, continued fraction otherwise.
double regularized_gamma_q(double s, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_pvalue(double stat, double dof);

// Pearson statistic; bins with expected < kMinExpected should be merged by
// the caller beforehand.
double chi_square_stat(std::span<const double> observed, std::span<const double> expected);

// One-sample Kolmogorov-Smirnov distance sup|F_n - F| against a cdf.
// The sample must be sorted ascending.
double ks_one_sample(std::span<const double> sorted_sample,
                     const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance; both samples sorted ascending.
double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b);

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2),
// with lambda = stat * sqrt(n_eff).
double ks_pvalue(double stat, double n_eff);

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t n = 0;
};

MeanSE mean_and_se(std::span<const double> sample);
double sample_variance(std::span<const double> sample); // denominator n-1

// Excess kurtosis m4/m2^2 - 3 with a leave-one-out jackknife standard error.
struct KurtosisEstimate {
    double excess = 0.0;
    double se = 0.0;
};
KurtosisEstimate excess_kurtosis(std::span<const double> sample);

} // namespace merws

#endif
