#include "merws/walk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace merws {

Step first_step(int d, RngStream& rng) {
    const std::uint64_t dir = rng.below(2 * std::uint64_t(d));
    return Step{static_cast<std::uint8_t>(2 + dir)};
}

Step apply_step_matrix(const StepMatrix& m, Step x, int d) {
    if (x.axis() > d)
        throw DimensionMismatch("step axis exceeds the matrix dimension");
    if (m.kind == StepMatrix::Kind::Zero || x.is_stop()) return Step::stop();
    if (m.kind == StepMatrix::Kind::Identity)
        return Step::move(x.axis(), m.sign * x.sign());
    if (m.power < 1 || m.power > d - 1)
        throw DimensionMismatch("shift power must lie in [1, d-1]");
    // J_d e_j = e_{j-1} (cyclic), so J_d^i e_j = e_{j-i mod d}
    const int j = x.axis() - 1;
    const int shifted = ((j - m.power) % d + d) % d;
    return Step::move(shifted + 1, m.sign * x.sign());
}

StepMatrix sample_step_matrix(const ModelParams& params, RngStream& rng) {
    const double u = rng.uniform01();
    if (u < params.p) return StepMatrix{StepMatrix::Kind::Identity, 0, +1};
    double edge = params.p + params.r;
    if (u < edge) return StepMatrix{StepMatrix::Kind::Zero, 0, +1};
    // 2d-1 signed matrices, q each: -I, then +/-J^i for i = 1..d-1
    const auto idx = rng.below(2 * std::uint64_t(params.d) - 1);
    if (idx == 0) return StepMatrix{StepMatrix::Kind::Identity, 0, -1};
    const int i = int((idx - 1) / 2) + 1;
    const int sign = (idx - 1) % 2 == 0 ? +1 : -1;
    return StepMatrix{StepMatrix::Kind::ShiftPower, i, sign};
}

Step memory_step(Step remembered, const ModelParams& params, RngStream& rng) {
    if (remembered.is_stop()) return Step::stop();
    const double u = rng.uniform01();
    if (u < params.p) return remembered;
    if (u < params.p + params.r) return Step::stop();
    const std::uint64_t j = rng.below(2 * std::uint64_t(params.d) - 1);
    return Step{detail::other_direction(remembered.code, j)};
}

void step(Trajectory& traj, RngStream& rng) {
    if (traj.n < 1)
        throw Error("step requires n >= 1; the first step is uniform over directions");
    const StepKernel kernel(traj.params);
    advance(traj, kernel, rng);
}

std::vector<TrajectoryRecord> simulate(const ModelParams& params, std::uint64_t n_steps,
                                       std::uint64_t seed,
                                       std::span<const std::uint64_t> checkpoints) {
    if (n_steps < 1)
        throw CheckpointOutOfRange("n_steps must be >= 1");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || checkpoints[i] > n_steps ||
            (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
            std::ostringstream os;
            os << "checkpoints must be strictly increasing within [1, " << n_steps << "]";
            throw CheckpointOutOfRange(os.str());
        }
    }

    Trajectory traj(params, n_steps);
    const StepKernel kernel(params);
    RngStream rng(seed);

    std::vector<TrajectoryRecord> records;
    records.reserve(checkpoints.size());
    std::size_t next_cp = 0;
    for (std::uint64_t k = 0; k < n_steps; ++k) {
        advance(traj, kernel, rng);
        if (next_cp < checkpoints.size() && traj.n == checkpoints[next_cp]) {
            records.push_back(TrajectoryRecord{traj.n, traj.position, traj.gram_diag, traj.sigma2});
            ++next_cp;
        }
    }
    return records;
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t n_steps, double ratio) {
    if (ratio <= 1.0) ratio = std::pow(10.0, 0.25);
    std::vector<std::uint64_t> cps;
    double x = 1.0;
    for (;;) {
        const auto v = static_cast<std::uint64_t>(std::llround(x));
        if (v >= n_steps) break;
        if (cps.empty() || v > cps.back()) cps.push_back(v);
        x *= ratio;
    }
    cps.push_back(n_steps);
    return cps;
}

} // namespace merws
