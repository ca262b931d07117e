#ifndef MERWS_COEFFICIENTS_HPP
#define MERWS_COEFFICIENTS_HPP

#include <cstdint>
#include <vector>

#include "merws/model.hpp"

namespace merws {

// log Gamma(x) for x > 0. Throws NonPositiveArgument otherwise.
double log_gamma(double x);

// Rising-factorial normalizer sequences
//   a_n = Gamma(n) Gamma(a+1) / Gamma(n+a),  a_1 = 1,  a_{n+1} = a_n * n/(n+a)
// and the same with parameter b. Built once by the multiplicative recurrence
// (never by gamma ratios, which overflow at large n) and shared read-only.
// For horizons beyond kCompensatedThreshold the recurrence runs in
// double-double arithmetic to keep the relative error at O(ulp).
class CoeffTable {
public:
    static constexpr std::uint64_t kCompensatedThreshold = 10'000'000;

    // a > -1, b in (0,1], n_max >= 1.
    static CoeffTable build(double a, double b, std::uint64_t n_max);
    static CoeffTable build(const ModelParams& params, std::uint64_t n_max) {
        return build(params.a, params.b, n_max);
    }

    double a_param() const { return a_; }
    double b_param() const { return b_; }
    std::uint64_t size() const { return static_cast<std::uint64_t>(a_seq_.size()); }

    // 1-based: a_at(n) = a_n for n in [1, n_max].
    double a_at(std::uint64_t n) const { return a_seq_[n - 1]; }
    double b_at(std::uint64_t n) const { return b_seq_[n - 1]; }
    double alpha_at(std::uint64_t n) const { return 1.0 + a_ / double(n); }

    const std::vector<double>& a_seq() const { return a_seq_; }
    const std::vector<double>& b_seq() const { return b_seq_; }

private:
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> a_seq_, b_seq_;
};

// Deterministic sequence v_n = sum_{k<=n} a_k^2/(k b_k).
std::vector<double> vn_partial_sums(double a, double b, std::uint64_t n_max);

// Regime-specific limit constants of v_n:
//   diffusive      v_n / n^{b-2a} -> ell_D = Gamma(a+1)^2 / ((b-2a) Gamma(b+1))
//   critical       v_n / log n    -> ell_C = Gamma(a+1)^2 / Gamma(2a+1)
double vn_limit_diffusive(double a, double b);
double vn_limit_critical(double a);

// Superdiffusive (2a > b): certified upper bound on sum_{k>N} t_k of the
// v_infinity series, t_k = Gamma(a+1)^2 Gamma(k+1) Gamma(k+1+b) /
// (Gamma(b+1) Gamma(k+1+a)^2 (k+1)). Wendel/Gautschi gamma-ratio bounds give
// t_k <= C (k+1+a)^{1-delta} (k+1)^{-2} with delta = 2a - b, and integral
// comparison yields the closed form below. The naive geometric ratio bound is
// invalid here: the term ratios increase to 1.
double vn_tail_bound(double a, double b, std::uint64_t n_terms);

struct VnInfinity {
    double partial_sum;   // sum of the first n_terms terms of Eq-series
    double tail_bound;    // certified bound on the omitted tail
    std::uint64_t n_terms;
};

// Partial summation of the v_infinity hypergeometric-type series with the
// certified tail window. Sums until vn_tail_bound < tol or k_max terms.
VnInfinity vn_limit_superdiffusive(double a, double b, double tol = 1e-6,
                                   std::uint64_t k_max = 20'000'000);

struct VnReport {
    Regime regime;
    std::uint64_t horizon;
    double v_n;            // v_N
    double normalized;     // v_N/N^{b-2a}, v_N/log N, or v_N itself
    double limit;          // ell_D, ell_C, or the v_infinity partial sum
    double limit_window;   // certified half-width on `limit` (superdiffusive only)
};

// v_N plus the regime-appropriate asymptote comparison.
VnReport vn_report(const ModelParams& params, std::uint64_t n_horizon);

// Running trace state of the predictable quadratic variation of M_n = a_n S_n,
// together with the companion sums w_n and v_n. Single-owner, one per
// trajectory.
struct QVState {
    double w = 0.0;         // w_n = sum a_k^2 sigma_k^2 / k
    double v = 0.0;         // v_n = sum a_k^2 / (k b_k)
    double qv_trace = 0.0;  // Tr<M>_n - 1 = sum_{k<n} a_{k+1}^2 [ (b/k) sigma_k^2 - (a/k)^2 |S_k|^2 ]
};

// Advances qv_trace by the trace of the conditional covariance of the next
// martingale increment, evaluated from the live state (sigma2, |S_n|^2) at
// time n. Throws NegativeIncrement if the increment is negative (impossible
// unless the trajectory state is corrupted).
void qv_trace_step(QVState& state, const CoeffTable& coeffs, std::uint64_t n,
                   std::uint64_t sigma2, std::uint64_t s_norm2);

} // namespace merws

#endif
