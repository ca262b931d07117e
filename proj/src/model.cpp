#include "merws/model.hpp"

#include <cmath>
#include <sstream>

#include "merws/errors.hpp"

namespace merws {

std::string to_string(Regime r) {
    switch (r) {
    case Regime::Diffusive: return "diffusive";
    case Regime::Critical: return "critical";
    case Regime::Superdiffusive: return "superdiffusive";
    }
    return "?";
}

Regime regime_from_string(const std::string& name) {
    if (name == "diffusive") return Regime::Diffusive;
    if (name == "critical") return Regime::Critical;
    if (name == "superdiffusive") return Regime::Superdiffusive;
    throw ConfigInvalid("regime: expected diffusive|critical|superdiffusive, got '" + name + "'");
}

double critical_p(int d, double r) {
    return (2.0 * d + 1.0) / (4.0 * d) * (1.0 - r);
}

ModelParams derive_params(int d, double p, double r, bool allow_no_stops) {
    if (d < 1 || d > 63) {
        std::ostringstream os;
        os << "dimension must be in [1, 63], got " << d;
        throw InvalidDimension(os.str());
    }
    const bool r_ok = allow_no_stops ? (r >= 0.0 && r < 1.0) : (r > 0.0 && r < 1.0);
    if (!r_ok || !std::isfinite(r)) {
        std::ostringstream os;
        os << "stop probability must lie in (0,1), got " << r;
        throw InvalidStopProbability(os.str());
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream os;
        os << "p must lie in [0,1], got " << p;
        throw SimplexViolation(os.str());
    }
    const double q = (1.0 - p - r) / (2.0 * d - 1.0);
    if (q < -1e-15 || q > 1.0) {
        std::ostringstream os;
        os << "p + (2d-1)q + r = 1 forces q = " << q << " outside [0,1]";
        throw SimplexViolation(os.str());
    }

    ModelParams m;
    m.d = d;
    m.p = p;
    m.q = q < 0.0 ? 0.0 : q;
    m.r = r;
    m.a = p - m.q;
    m.b = 1.0 - r;
    m.p_crit = critical_p(d, r);
    m.regime = classify_regime(m);
    return m;
}

Regime classify_regime(const ModelParams& params) {
    const double gap = 2.0 * params.a - params.b;
    if (std::fabs(gap) <= kRegimeTol) return Regime::Critical;
    return gap < 0.0 ? Regime::Diffusive : Regime::Superdiffusive;
}

Regime classify_regime_by_pcrit(const ModelParams& params) {
    // 2a - b = (4d/(2d-1)) (p - p_crit), so the tolerance maps linearly.
    const double scale = (2.0 * params.d - 1.0) / (4.0 * params.d);
    const double gap = params.p - params.p_crit;
    if (std::fabs(gap) <= kRegimeTol * scale) return Regime::Critical;
    return gap < 0.0 ? Regime::Diffusive : Regime::Superdiffusive;
}

double diffusive_variance(const ModelParams& params) {
    if (classify_regime(params) != Regime::Diffusive)
        throw WrongRegime("v^2 is defined only in the diffusive regime (2a < b)");
    return params.b / (params.d * (params.b - 2.0 * params.a));
}

double superdiffusive_variance(const ModelParams& params) {
    if (classify_regime(params) != Regime::Superdiffusive)
        throw WrongRegime("theta^2 is defined only in the superdiffusive regime (2a > b)");
    return params.b / (params.d * (2.0 * params.a - params.b));
}

double solve_p_for_regime(int d, double r, Regime target) {
    const double pc = critical_p(d, r);
    switch (target) {
    case Regime::Critical: return pc;
    case Regime::Diffusive: return 0.5 * pc;
    case Regime::Superdiffusive: return 0.5 * (pc + (1.0 - r));
    }
    return pc;
}

} // namespace merws
