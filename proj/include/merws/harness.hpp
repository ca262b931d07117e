#ifndef MERWS_HARNESS_HPP
#define MERWS_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "merws/stats.hpp"

namespace merws {

inline constexpr const char* kVersion = "0.1.0";

// One reproducible run: model parameters, budget, seeding, checkpoint policy,
// experiment name and output sinks. Round-trips losslessly through JSON.
struct ExperimentConfig {
    int dim = 1;
    std::optional<double> p;            // required unless regime is set
    double r = 0.0;
    std::optional<std::string> regime;  // overrides p by solving against p_crit
    bool allow_no_stops = false;

    std::uint64_t steps = 0;
    std::uint64_t trajectories = 0;
    std::uint64_t seed = 0;

    double checkpoint_ratio = 0.0;                 // 0 = default 10^(1/4)
    std::vector<std::uint64_t> checkpoint_list;    // explicit overrides ratio

    std::string experiment;  // simulate|gram-limit|clt|mixture-clt|superdiffusive|
                             // lil|oracle|enumerate|ml-table|ml-sample|coefftable
    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};
    int workers = 0;

    void validate() const;           // throws ConfigInvalid with a field message
    ModelParams resolve_params() const;
    std::vector<std::uint64_t> resolve_checkpoints() const;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

// Pairwise-distinct per-trajectory stream seeds, independent of worker count
// and scheduling: seed_i = mix64(master_seed XOR i).
std::vector<std::uint64_t> derive_worker_streams(std::uint64_t master_seed,
                                                 std::uint64_t n_traj);

struct RunResult {
    std::vector<TestReport> reports;
    std::string report_json;  // timestamp-free, byte-stable
    int exit_status = 0;      // 0 iff every non-qualitative report passed
};

// Executes one experiment, writing artifacts (trajectories.csv, summary.json,
// report.json, metadata.json as applicable) under config.out_dir.
RunResult run(const ExperimentConfig& config);

// Acceptance-criteria checks that live on top of plain ensembles.
// Exact martingale mean E[b_n sigma_n^2] = 1 at every checkpoint, and the
// second-moment oracle at horizon `outer_n`.
std::vector<TestReport> verify_exact_moments(const EnsembleSummary& summary,
                                             std::uint64_t outer_n,
                                             const VerifyTolerances& tol = {});

// Brute-force equivalence: exhaustive law vs Monte Carlo (chi-square) and
// enumerated moments vs the oracle recursion (1e-12).
std::vector<TestReport> verify_enumeration(const ModelParams& params, std::uint64_t n,
                                           std::uint64_t n_traj, std::uint64_t master_seed,
                                           int workers = 0,
                                           const VerifyTolerances& tol = {});

// The default experiment suite: one parameter set per regime plus the
// gram-limit, superdiffusive and LIL runs, every report tagged with its
// acceptance criterion. Deterministic given (seed, workers-independent).
RunResult verify_all(std::uint64_t seed, int workers, const std::string& out_dir,
                     bool write_artifacts = true);

} // namespace merws

#endif
