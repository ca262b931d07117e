#include "merws/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "merws/coefficients.hpp"
#include "merws/errors.hpp"

namespace merws {

double expected_sigma2(const ModelParams& params, std::uint64_t n) {
    if (n < 1)
        throw OutOfEvaluationRange("expected_sigma2 requires n >= 1");
    double bn = 1.0;
    for (std::uint64_t k = 1; k < n; ++k) bn *= double(k) / (double(k) + params.b);
    return 1.0 / bn;
}

MomentTable expected_outer(const ModelParams& params, std::uint64_t n) {
    auto grid = expected_outer_grid(params, {n});
    return grid.front();
}

std::vector<MomentTable> expected_outer_grid(const ModelParams& params,
                                             const std::vector<std::uint64_t>& horizons) {
    if (horizons.empty() || horizons.front() < 1)
        throw OutOfEvaluationRange("expected_outer requires horizons >= 1");
    const double a = params.a, b = params.b, q = params.q;
    const double d = double(params.d);

    std::vector<MomentTable> out;
    out.reserve(horizons.size());
    double s = 1.0 / d;   // diagonal entry of E[S_n S_n^T]
    double bn = 1.0;      // b_n
    std::uint64_t n = 1;
    std::size_t idx = 0;
    for (;;) {
        while (idx < horizons.size() && horizons[idx] == n) {
            out.push_back(MomentTable{n, 1.0 / bn, 1.0 / (d * bn), s});
            ++idx;
        }
        if (idx == horizons.size()) break;
        if (horizons[idx] < n)
            throw OutOfEvaluationRange("expected_outer horizons must be ascending");
        const double k = double(n);
        s = (1.0 + 2.0 * a / k) * s + (a / k) / (d * bn) + (2.0 * q / k) / bn;
        bn *= k / (k + b);
        ++n;
    }
    return out;
}

double expected_outer_closed_form(const ModelParams& params, std::uint64_t n) {
    const double a2 = 2.0 * params.a, b = params.b;
    if (std::fabs(a2 - b) <= kRegimeTol || params.a == 0.0 || a2 <= -1.0)
        throw OutOfEvaluationRange("closed form degenerates at 2a = b, a = 0 or 2a <= -1");
    // (x)^(n)/(n-1)! = x / x_n with x_n the rising-factorial normalizer
    double a2n = 1.0, bn = 1.0;
    for (std::uint64_t k = 1; k < n; ++k) {
        a2n *= double(k) / (double(k) + a2);
        bn *= double(k) / (double(k) + b);
    }
    return (a2 / a2n - b / bn) / (params.d * (a2 - b));
}

double expected_L_covariance_diag(const ModelParams& params) {
    const double theta2 = superdiffusive_variance(params); // throws WrongRegime
    return theta2 / (params.b * std::exp(log_gamma(2.0 * params.a)));
}

double JointLaw::total_mass() const {
    double sum = 0.0, comp = 0.0;
    for (const auto& atom : atoms) {
        const double y = atom.prob - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double JointLaw::mean_sigma2() const {
    double sum = 0.0;
    for (const auto& atom : atoms) sum += atom.prob * double(atom.sigma2);
    return sum;
}

double JointLaw::outer_moment(int i, int j) const {
    double sum = 0.0;
    for (const auto& atom : atoms) sum += atom.prob * double(atom.s[i]) * double(atom.s[j]);
    return sum;
}

JointLaw enumerate_distribution(const ModelParams& params, std::uint64_t n) {
    if (params.d > 2 || n > 6 || n < 1) {
        std::ostringstream os;
        os << "exhaustive enumeration supports d <= 2, 1 <= n <= 6 (got d=" << params.d
           << ", n=" << n << ")";
        throw TooLarge(os.str());
    }
    const int d = params.d;
    const std::size_t n_codes = 2 * d + 2; // index by step code; 1 unused
    using Counts = std::array<std::uint8_t, 6>;

    // The memory rule sees the history only through the count of each step
    // value, so the exhaustive expansion over (first step, U_k, rule outcome)
    // collapses exactly onto count vectors; states reached by several
    // histories carry the summed probability.
    std::map<Counts, double> frontier;
    {
        Counts c{};
        for (int dir = 0; dir < 2 * d; ++dir) {
            c.fill(0);
            c[2 + dir] = 1;
            frontier[c] += 1.0 / double(2 * d);
        }
    }

    for (std::uint64_t k = 1; k < n; ++k) {
        std::map<Counts, double> next;
        for (const auto& [c, prob] : frontier) {
            const double kk = double(k);
            const std::uint64_t stops = c[0];
            const std::uint64_t moves = k - stops;
            // stop outcome: remembered stop always, remembered move w.p. r
            {
                Counts c2 = c;
                ++c2[0];
                next[c2] += prob * (double(moves) * params.r + double(stops)) / kk;
            }
            for (std::size_t v = 2; v < n_codes; ++v) {
                const double pv =
                    (double(c[v]) * params.p + double(moves - c[v]) * params.q) / kk;
                if (pv == 0.0) continue;
                Counts c2 = c;
                ++c2[v];
                next[c2] += prob * pv;
            }
        }
        frontier.swap(next);
    }

    JointLaw law;
    law.d = d;
    law.n = n;
    law.atoms.reserve(frontier.size());
    for (const auto& [c, prob] : frontier) {
        JointLaw::Atom atom;
        for (int i = 0; i < d; ++i) {
            const std::uint64_t plus = c[2 * (i + 1)];
            const std::uint64_t minus = c[2 * (i + 1) + 1];
            atom.s[i] = std::int64_t(plus) - std::int64_t(minus);
            atom.gram[i] = plus + minus;
            atom.sigma2 += atom.gram[i];
        }
        atom.prob = prob;
        law.atoms.push_back(atom);
    }
    std::sort(law.atoms.begin(), law.atoms.end(), [](const auto& x, const auto& y) {
        if (x.s != y.s) return x.s < y.s;
        return x.gram < y.gram;
    });
    return law;
}

} // namespace merws
