#ifndef MERWS_ORACLE_HPP
#define MERWS_ORACLE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "merws/model.hpp"

namespace merws {

// Exact E[sigma_n^2] = 1/b_n by the coefficient recurrence.
double expected_sigma2(const ModelParams& params, std::uint64_t n);

// Exact finite-n moments at one horizon. e_outer_diag is the common diagonal
// entry of E[S_n S_n^T] (the off-diagonals vanish by symmetry); e_gram_diag
// the common diagonal entry of E[Sigma_n] = 1/(d b_n).
struct MomentTable {
    std::uint64_t n = 0;
    double e_sigma2 = 0.0;
    double e_gram_diag = 0.0;
    double e_outer_diag = 0.0;
};

// Scalar recursion s_1 = 1/d, s_{n+1} = (1+2a/n)s_n + (a/n)/(d b_n) + (2q/n)/b_n.
// Uniformly valid in every regime (the closed form degenerates at 2a = b and
// a = 0); this is the production oracle.
MomentTable expected_outer(const ModelParams& params, std::uint64_t n);

// One pass for a whole grid of horizons (ascending).
std::vector<MomentTable> expected_outer_grid(const ModelParams& params,
                                             const std::vector<std::uint64_t>& horizons);

// Closed form [(2a)^(n) - (b)^(n)] / (d (2a-b) (n-1)!) of the diagonal entry,
// valid as an algebraic identity when 2a != b and a != 0. Cross-check only.
double expected_outer_closed_form(const ModelParams& params, std::uint64_t n);

// Diagonal entry of E[L L^T] = theta^2 / ((1-r) Gamma(2a)) I_d in the
// superdiffusive regime; throws WrongRegime otherwise.
double expected_L_covariance_diag(const ModelParams& params);

// Exact joint law of (S_n, gram_diag) for d <= 2, n <= 6 by exhaustive
// expansion of the dynamics. Probabilities sum to 1 within 1e-12 and the
// marginal moments reproduce expected_sigma2 / expected_outer exactly.
struct JointLaw {
    struct Atom {
        std::array<std::int64_t, 2> s{};       // position (unused axes zero)
        std::array<std::uint64_t, 2> gram{};   // Gram diagonal
        std::uint64_t sigma2 = 0;
        double prob = 0.0;
    };
    int d = 1;
    std::uint64_t n = 0;
    std::vector<Atom> atoms;  // sorted by (s, gram)

    double total_mass() const;
    double mean_sigma2() const;
    // Entry (i,j) of E[S_n S_n^T].
    double outer_moment(int i, int j) const;
};

JointLaw enumerate_distribution(const ModelParams& params, std::uint64_t n);

} // namespace merws

#endif
