#ifndef MERWS_MODEL_HPP
#define MERWS_MODEL_HPP

#include <cstdint>
#include <string>

namespace merws {

enum class Regime { Diffusive, Critical, Superdiffusive };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& name);

// Absolute tolerance on 2a - b used for critical-regime detection.
inline constexpr double kRegimeTol = 1e-12;

// Validated model parameters of the d-dimensional elephant random walk with
// stops. Entered as (d, p, r); q is recovered from the probability simplex
// p + (2d-1)q + r = 1. Immutable after construction, safe to share across
// threads.
struct ModelParams {
    int d = 1;        // dimension, 1 <= d <= 63 (63 from the 1-byte step encoding)
    double p = 0.0;   // probability of repeating the remembered direction
    double q = 0.0;   // probability of each of the other 2d-1 directions
    double r = 0.0;   // stop probability, in (0,1) unless allow_no_stops
    double a = 0.0;   // memory parameter, a = p - q
    double b = 0.0;   // activity parameter, b = 1 - r = a + 2dq
    double p_crit = 0.0;  // critical memory value (2d+1)(1-r)/(4d)
    Regime regime = Regime::Diffusive;
};

// Critical memory value p_{d,r}.
double critical_p(int d, double r);

// Validates (d, p, r), derives q from the simplex, fills all derived fields
// and classifies the regime. Throws InvalidDimension, InvalidStopProbability
// or SimplexViolation. allow_no_stops admits r = 0 for cross-checks against
// the classical walk without stops (Mittag-Leffler experiments are
// meaningless there).
ModelParams derive_params(int d, double p, double r, bool allow_no_stops = false);

// Regime from the sign of 2a - b (|2a-b| <= kRegimeTol means critical).
Regime classify_regime(const ModelParams& params);

// Same classification via the p vs p_crit comparison, with the tolerance
// mapped through 2a - b = (4d/(2d-1)) (p - p_crit). Used by consistency
// checks.
Regime classify_regime_by_pcrit(const ModelParams& params);

// Asymptotic variance v^2 = b/(d(b-2a)) of the diffusive CLT.
// Throws WrongRegime unless 2a < b.
double diffusive_variance(const ModelParams& params);

// Asymptotic variance theta^2 = b/(d(2a-b)) of the superdiffusive regime.
// Throws WrongRegime unless 2a > b.
double superdiffusive_variance(const ModelParams& params);

// Memory probability to target a regime: critical solves p = p_crit(d,r);
// diffusive takes p_crit/2; superdiffusive the midpoint of (p_crit, 1-r).
double solve_p_for_regime(int d, double r, Regime target);

} // namespace merws

#endif
