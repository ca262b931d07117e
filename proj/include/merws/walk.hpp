#ifndef MERWS_WALK_HPP
#define MERWS_WALK_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "merws/errors.hpp"
#include "merws/model.hpp"
#include "merws/rng.hpp"

namespace merws {

// One increment X_k: the zero step (stop) or a signed unit move along one
// axis. Packed into one byte: 0 = stop, otherwise (axis << 1) | (sign < 0)
// with axis in [1, d]; this caps d at 63.
struct Step {
    std::uint8_t code = 0;

    static Step stop() { return Step{0}; }
    static Step move(int axis, int sign) {
        return Step{static_cast<std::uint8_t>((axis << 1) | (sign < 0 ? 1 : 0))};
    }
    bool is_stop() const { return code == 0; }
    int axis() const { return code >> 1; }       // 1-based, 0 for stop
    int sign() const { return (code & 1) ? -1 : 1; }
    bool operator==(const Step&) const = default;
};

// One of the 2d+1 step matrices: +/-I_d, +/-J_d^power (power in [1, d-1]),
// or the zero matrix. J_d is the cyclic permutation sending e_j to e_{j-1}
// (indices mod d).
struct StepMatrix {
    enum class Kind { Identity, ShiftPower, Zero };
    Kind kind = Kind::Identity;
    int power = 0;  // ShiftPower only
    int sign = 1;   // Identity / ShiftPower
};

// First step: uniform over the 2d signed directions, never a stop.
Step first_step(int d, RngStream& rng);

// Deterministic action of a step matrix on a step. Zero * x = stop,
// anything * stop = stop, (sign J^i)(s e_j) = (sign*s) e_{shift(j,i)}.
Step apply_step_matrix(const StepMatrix& m, Step x, int d);

// Samples A per the model weights {+I: p, -I: q, +/-J^i: q each, 0: r}.
// Cross-validation path only; production uses the collapsed memory_step.
StepMatrix sample_step_matrix(const ModelParams& params, RngStream& rng);

// Collapsed memory rule: stop stays stop; a remembered move repeats with
// probability p, stops with probability r, otherwise one of the 2d-1 other
// signed directions uniformly (q each). Distributionally identical to
// sampling a StepMatrix and applying it.
Step memory_step(Step remembered, const ModelParams& params, RngStream& rng);

// Precomputed constants of the memory rule for the hot loop.
struct StepKernel {
    double p_same;
    double p_same_or_stop;
    std::uint64_t n_other;  // 2d - 1
    std::uint64_t n_dir;    // 2d

    explicit StepKernel(const ModelParams& params)
        : p_same(params.p),
          p_same_or_stop(params.p + params.r),
          n_other(2 * std::uint64_t(params.d) - 1),
          n_dir(2 * std::uint64_t(params.d)) {}
};

// Evolving walk state. position and the Gram diagonal are exact integers;
// sigma2 counts the non-stop steps; snorm2 tracks |S_n|^2 incrementally.
// Buffers are reused across trajectories via reset().
struct Trajectory {
    ModelParams params;
    std::uint64_t n = 0;
    std::vector<std::int64_t> position;
    std::vector<std::uint64_t> gram_diag;
    std::uint64_t sigma2 = 0;
    std::uint64_t snorm2 = 0;
    std::vector<std::uint8_t> history;

    Trajectory(const ModelParams& p, std::uint64_t n_steps_capacity) : params(p) {
        position.assign(p.d, 0);
        gram_diag.assign(p.d, 0);
        history.resize(n_steps_capacity);
    }
    void reset() {
        n = 0;
        sigma2 = 0;
        snorm2 = 0;
        std::fill(position.begin(), position.end(), 0);
        std::fill(gram_diag.begin(), gram_diag.end(), 0);
    }
};

namespace detail {

// j-th signed-direction code among the 2d-1 codes != rem (codes 2 .. 2d+1).
inline std::uint8_t other_direction(std::uint8_t rem, std::uint64_t j) {
    const std::uint64_t c = 2 + j + (j >= std::uint64_t(rem) - 2 ? 1 : 0);
    return static_cast<std::uint8_t>(c);
}

} // namespace detail

// Advances a trajectory by one step (the n=0 case is the uniform first step).
// This single inline function is the production dynamics for both the
// single-trajectory API and the ensemble runner.
inline void advance(Trajectory& traj, const StepKernel& kernel, RngStream& rng) {
    std::uint8_t next;
    if (traj.n == 0) {
        next = static_cast<std::uint8_t>(2 + rng.below(kernel.n_dir));
    } else {
        const std::uint8_t rem = traj.history[rng.below(traj.n)];
        if (rem == 0) {
            next = 0;
        } else {
            const double u = rng.uniform01();
            if (u < kernel.p_same) {
                next = rem;
            } else if (u < kernel.p_same_or_stop) {
                next = 0;
            } else {
                next = detail::other_direction(rem, rng.below(kernel.n_other));
            }
        }
    }
    traj.history[traj.n] = next;
    ++traj.n;
    if (next != 0) {
        const unsigned ax = (next >> 1) - 1;
        const std::int64_t s = (next & 1) ? -1 : 1;
        traj.snorm2 += std::uint64_t(2 * s * traj.position[ax] + 1);
        traj.position[ax] += s;
        ++traj.gram_diag[ax];
        ++traj.sigma2;
    }
}

// Spec-facing single-step operation (requires n >= 1; use first_step for n=0).
void step(Trajectory& traj, RngStream& rng);

// State emitted at a checkpoint.
struct TrajectoryRecord {
    std::uint64_t n = 0;
    std::vector<std::int64_t> position;
    std::vector<std::uint64_t> gram_diag;
    std::uint64_t sigma2 = 0;
};

// Runs one trajectory for n_steps steps, emitting a record at each checkpoint
// (sorted, within [1, n_steps]; throws CheckpointOutOfRange otherwise).
// Deterministic given (params, n_steps, seed) and the fixed generator.
std::vector<TrajectoryRecord> simulate(const ModelParams& params, std::uint64_t n_steps,
                                       std::uint64_t seed,
                                       std::span<const std::uint64_t> checkpoints);

// Log-spaced checkpoint grid: unique rounded powers of `ratio` up to and
// including n_steps. All limit theorems live on a log scale.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t n_steps, double ratio = 0.0);

} // namespace merws

#endif
