#ifndef MERWS_MITTAG_HPP
#define MERWS_MITTAG_HPP

#include "merws/rng.hpp"

namespace merws {

// Mittag-Leffler function E_alpha(t) = sum_n t^n / Gamma(1+n alpha) for
// alpha in (0,1], |t| <= t_max. The series is truncated once a decreasing
// term-ratio certifies an absolute tail below 1e-12; throws
// OutOfEvaluationRange when |t| > t_max or the certificate cannot be reached
// in double precision.
double ml_function(double alpha, double t, double t_max = 50.0);

// Density of the ML(alpha) law, 0 < alpha < 1, x > 0:
//   f_alpha(x) = (1/(pi alpha)) sum_{n>=1} Gamma(1+alpha n) sin(alpha n pi) (-x)^{n-1}/n!
// Evaluated in binary128 with compensated summation. The returned value is
// certified to absolute accuracy `tol`: first-omitted-term bound (cap 500
// terms) plus a round-off majorant. Throws OutOfEvaluationRange where the
// certificate fails; never returns a negative value at a certified point.
double ml_pdf(double alpha, double x, double tol = 1e-9);

// m-th moment m!/Gamma(1+m alpha) of ML(alpha), alpha in (0,1], m >= 0.
double ml_moment(double alpha, int m);

// One ML(alpha) draw, 0 < alpha < 1, via the inverse-power stable
// representation: with theta = pi U and E standard exponential,
//   ML = E^{1-alpha} sin(theta) / ( sin(alpha theta)^alpha sin((1-alpha) theta)^{1-alpha} ),
// which is S^{-alpha} for a one-sided alpha-stable S with Laplace transform
// exp(-lambda^alpha) (Kanter's representation).
double ml_sample(double alpha, RngStream& rng);

// A Mittag-Leffler law ML(alpha). For the walk use-case alpha = 1 - r = b.
class MLDistribution {
public:
    explicit MLDistribution(double alpha);
    double alpha() const { return alpha_; }
    double function(double t) const { return ml_function(alpha_, t); }
    double pdf(double x) const { return ml_pdf(alpha_, x); }
    double moment(int m) const { return ml_moment(alpha_, m); }
    double sample(RngStream& rng) const { return ml_sample(alpha_, rng); }

private:
    double alpha_;
};

} // namespace merws

#endif
