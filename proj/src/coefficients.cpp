#include "merws/coefficients.hpp"

#include <cmath>
#include <sstream>

#include "merws/errors.hpp"

namespace merws {

double log_gamma(double x) {
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "log_gamma requires x > 0, got " << x;
        throw NonPositiveArgument(os.str());
    }
    return std::lgamma(x);
}

namespace {

// Dekker-style double-double product step: (hi, lo) *= f, f exact-ish double.
struct DD {
    double hi = 1.0, lo = 0.0;
    void mul(double f) {
        const double p = hi * f;
        const double e = std::fma(hi, f, -p);
        hi = p;
        lo = std::fma(lo, f, e);
        // renormalize
        const double s = hi + lo;
        lo = lo - (s - hi);
        hi = s;
    }
    double value() const { return hi + lo; }
};

} // namespace

CoeffTable CoeffTable::build(double a, double b, std::uint64_t n_max) {
    if (!(a > -1.0))
        throw NonPositiveArgument("coeff table requires a > -1");
    if (!(b > 0.0 && b <= 1.0))
        throw NonPositiveArgument("coeff table requires b in (0,1]");
    if (n_max < 1)
        throw NonPositiveArgument("coeff table horizon must be >= 1");

    CoeffTable t;
    t.a_ = a;
    t.b_ = b;
    t.a_seq_.resize(n_max);
    t.b_seq_.resize(n_max);

    if (n_max <= kCompensatedThreshold) {
        double an = 1.0, bn = 1.0;
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            t.a_seq_[n - 1] = an;
            t.b_seq_[n - 1] = bn;
            const double k = double(n);
            an *= k / (k + a);
            bn *= k / (k + b);
        }
    } else {
        DD an, bn;
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            t.a_seq_[n - 1] = an.value();
            t.b_seq_[n - 1] = bn.value();
            const double k = double(n);
            an.mul(k / (k + a));
            bn.mul(k / (k + b));
        }
    }
    return t;
}

std::vector<double> vn_partial_sums(double a, double b, std::uint64_t n_max) {
    std::vector<double> v(n_max);
    double an = 1.0, bn = 1.0;
    double sum = 0.0, comp = 0.0; // Kahan
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const double k = double(n);
        const double term = an * an / (k * bn);
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        v[n - 1] = sum;
        an *= k / (k + a);
        bn *= k / (k + b);
    }
    return v;
}

double vn_limit_diffusive(double a, double b) {
    const double lg = 2.0 * log_gamma(a + 1.0) - log_gamma(b + 1.0);
    return std::exp(lg) / (b - 2.0 * a);
}

double vn_limit_critical(double a) {
    return std::exp(2.0 * log_gamma(a + 1.0) - log_gamma(2.0 * a + 1.0));
}

double vn_tail_bound(double a, double b, std::uint64_t n_terms) {
    const double delta = 2.0 * a - b;
    const double c = std::exp(2.0 * log_gamma(a + 1.0) - log_gamma(b + 1.0));
    const double nn = double(n_terms);
    const double edge = (nn + 1.0 + a) / (nn + 1.0);
    return c * edge * edge * std::pow(nn + a, -delta) / delta;
}

VnInfinity vn_limit_superdiffusive(double a, double b, double tol, std::uint64_t k_max) {
    if (!(2.0 * a > b))
        throw WrongRegime("v_infinity series converges only for 2a > b");
    // terms indexed from k = 0; t_0 = 1; t_{k+1}/t_k = ((k+1)/(k+1+a))^2 (k+1+b)/(k+2)
    double term = 1.0;
    double sum = 0.0, comp = 0.0;
    std::uint64_t count = 0;
    for (;;) {
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        ++count;
        if (count == k_max) break;
        if (count >= 1024 && count % 65536 == 0 && vn_tail_bound(a, b, count) < tol) break;
        const double kk = double(count - 1);
        const double r1 = (kk + 1.0) / (kk + 1.0 + a);
        term *= r1 * r1 * (kk + 1.0 + b) / (kk + 2.0);
    }
    return VnInfinity{sum, vn_tail_bound(a, b, count), count};
}

VnReport vn_report(const ModelParams& params, std::uint64_t n_horizon) {
    const auto sums = vn_partial_sums(params.a, params.b, n_horizon);
    VnReport rep;
    rep.regime = classify_regime(params);
    rep.horizon = n_horizon;
    rep.v_n = sums.back();
    rep.limit_window = 0.0;
    switch (rep.regime) {
    case Regime::Diffusive:
        rep.normalized = rep.v_n / std::pow(double(n_horizon), params.b - 2.0 * params.a);
        rep.limit = vn_limit_diffusive(params.a, params.b);
        break;
    case Regime::Critical:
        rep.normalized = rep.v_n / std::log(double(n_horizon));
        rep.limit = vn_limit_critical(params.a);
        break;
    case Regime::Superdiffusive: {
        const auto inf = vn_limit_superdiffusive(params.a, params.b);
        rep.normalized = rep.v_n;
        rep.limit = inf.partial_sum;
        rep.limit_window = inf.tail_bound;
        break;
    }
    }
    return rep;
}

void qv_trace_step(QVState& state, const CoeffTable& coeffs, std::uint64_t n,
                   std::uint64_t sigma2, std::uint64_t s_norm2) {
    const double a = coeffs.a_param();
    const double b = coeffs.b_param();
    const double k = double(n);
    const double an = coeffs.a_at(n);
    const double an1 = coeffs.a_at(n + 1);
    const double bn = coeffs.b_at(n);

    state.w += an * an * double(sigma2) / k;
    state.v += an * an / (k * bn);

    const double cov_trace = (b / k) * double(sigma2) - (a / k) * (a / k) * double(s_norm2);
    const double increment = an1 * an1 * cov_trace;
    if (increment < 0.0) {
        std::ostringstream os;
        os << "conditional covariance trace went negative at n=" << n
           << " (sigma2=" << sigma2 << ", |S|^2=" << s_norm2 << ")";
        throw NegativeIncrement(os.str());
    }
    state.qv_trace += increment;
}

} // namespace merws
