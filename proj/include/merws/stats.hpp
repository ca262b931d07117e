#ifndef MERWS_STATS_HPP
#define MERWS_STATS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "merws/model.hpp"

namespace merws {

struct EnsembleConfig {
    ModelParams params;
    std::uint64_t n_steps = 0;
    std::uint64_t n_traj = 0;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> checkpoints;
    std::uint64_t traj_offset = 0;  // global index of the first trajectory
    bool track_w = false;           // accumulate w_n along each trajectory
    bool track_qv = false;          // accumulate Tr<M>_n - 1 along each trajectory
    int workers = 0;                // 0 = hardware concurrency
};

// Aggregated Monte Carlo state: the exact integer walk state of every
// trajectory at every checkpoint, trajectory-major. All derived statistics
// are computed from these records in trajectory order, so results are
// byte-identical for any worker count. Summaries over disjoint contiguous
// index ranges merge by concatenation.
struct EnsembleSummary {
    ModelParams params;
    std::uint64_t n_steps = 0;
    std::uint64_t n_traj = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t traj_offset = 0;
    std::string generator;
    std::vector<std::uint64_t> checkpoints;

    // layout: [ (traj * n_cp + cp) * d + axis ] for s/gram,
    //         [ traj * n_cp + cp ] for sigma2/w/qv
    std::vector<std::int64_t> s;
    std::vector<std::uint64_t> gram;
    std::vector<std::uint64_t> sigma2;
    std::vector<double> w;   // empty unless track_w
    std::vector<double> qv;  // empty unless track_qv

    std::size_t n_cp() const { return checkpoints.size(); }
    std::size_t rec(std::uint64_t traj, std::size_t cp) const { return traj * n_cp() + cp; }
    // index of checkpoint n; throws InsufficientHorizon if absent
    std::size_t checkpoint_index(std::uint64_t n) const;
};

EnsembleSummary ensemble_run(const EnsembleConfig& config);

// Concatenates two summaries over adjacent trajectory ranges (identical
// params, seed, horizon and checkpoints required).
EnsembleSummary merge(const EnsembleSummary& lo, const EnsembleSummary& hi);

struct TestReport {
    std::string name;
    double statistic = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool qualitative = false;  // excluded from exit-status aggregation
    std::uint64_t sample_size = 0;
    std::string notes;
};

// Tolerances pinned by the acceptance criteria; every reference value is
// computed from model/oracle/mittag at run time, never hard-coded.
struct VerifyTolerances {
    double se_multiplier = 3.0;        // exact-identity checks
    double gram_share = 0.01;          // gram shares vs 1/d
    double ml_m2_rel = 0.07;           // 2nd moment of sigma^2/n^b
    double ml_m3_rel = 0.12;           // 3rd moment
    double ml_ks = 0.03;               // two-sample KS vs ML sampler
    std::uint64_t ml_draws = 1'000'000;
    double clt_var_rel_diffusive = 0.05;
    double clt_var_rel_critical = 0.10;
    double clt_ks = 0.05;
    double mixture_var_rel = 0.07;
    double fluct_ks = 0.08;            // includes the documented L-hat plug-in bias
    double superdiff_cov_rel = 0.10;
    double lil_band_lo = 0.05;
    double lil_band_hi = 20.0;
};

// Lemma 2.1 verification: gram shares vs 1/d, moments of sigma_n^2/n^b vs the
// ML(b) moments (m=1 replaced by the exact finite-n value 1/(n^b b_n)), and a
// two-sample KS against ML(b) sampler draws. Requires final n >= 1e4.
std::vector<TestReport> verify_gram_limit(const EnsembleSummary& summary,
                                          const VerifyTolerances& tol = {});

// Self-normalized CLT checks in the diffusive (Var -> v^2) or critical
// (Var -> 1/d with the log sigma_n^2 studentizer) regime. Requires final
// n >= 1e5.
std::vector<TestReport> verify_clt(const EnsembleSummary& summary,
                                   const VerifyTolerances& tol = {});

// Mixture law at the deterministic n^b normalization: variance vs
// v^2 E[ML(b)] (diffusive; critical uses the n^b log n normalizer and b/d)
// and positive excess kurtosis of the scale mixture.
std::vector<TestReport> verify_mixture_clt(const EnsembleSummary& summary,
                                           const VerifyTolerances& tol = {});

// Superdiffusive limit vector: moments of L-hat = S_{N_h}/N_h^a, the
// mean-square Cauchy decrease, the exact second-moment oracle, and the
// Gaussian fluctuation around n^a L-hat at n = N_h/100.
std::vector<TestReport> verify_superdiffusive(const EnsembleSummary& summary,
                                              const VerifyTolerances& tol = {});

// Qualitative iterated-logarithm monitor: ensemble max over trajectories of
// sup_n R_n must land within [band_lo, band_hi] x the theoretical constant.
TestReport lil_monitor(const EnsembleSummary& summary, const VerifyTolerances& tol = {});

} // namespace merws

#endif
