#include "merws/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "merws/coefficients.hpp"
#include "merws/errors.hpp"
#include "merws/gof.hpp"
#include "merws/mittag.hpp"
#include "merws/oracle.hpp"
#include "merws/walk.hpp"

namespace merws {

std::size_t EnsembleSummary::checkpoint_index(std::uint64_t n) const {
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        if (checkpoints[i] == n) return i;
    std::ostringstream os;
    os << "checkpoint n=" << n << " was not recorded";
    throw InsufficientHorizon(os.str());
}

EnsembleSummary ensemble_run(const EnsembleConfig& config) {
    if (config.n_traj < 1)
        throw ConfigInvalid("ensemble requires at least one trajectory");
    if (config.checkpoints.empty())
        throw CheckpointOutOfRange("ensemble requires at least one checkpoint");
    for (std::size_t i = 0; i < config.checkpoints.size(); ++i) {
        const auto cp = config.checkpoints[i];
        if (cp < 1 || cp > config.n_steps ||
            (i > 0 && cp <= config.checkpoints[i - 1]))
            throw CheckpointOutOfRange("checkpoints must be strictly increasing within [1, n_steps]");
    }

    const int d = config.params.d;
    const std::size_t n_cp = config.checkpoints.size();

    EnsembleSummary summary;
    summary.params = config.params;
    summary.n_steps = config.n_steps;
    summary.n_traj = config.n_traj;
    summary.master_seed = config.master_seed;
    summary.traj_offset = config.traj_offset;
    summary.generator = kGeneratorName;
    summary.checkpoints = config.checkpoints;
    summary.s.resize(config.n_traj * n_cp * d);
    summary.gram.resize(config.n_traj * n_cp * d);
    summary.sigma2.resize(config.n_traj * n_cp);
    if (config.track_w) summary.w.resize(config.n_traj * n_cp);
    if (config.track_qv) summary.qv.resize(config.n_traj * n_cp);

    // per-step coefficient tables, shared read-only
    std::vector<double> w_coeff;   // a_n^2 / n
    std::vector<double> qv_coeff;  // a_{n+1}^2
    if (config.track_w || config.track_qv) {
        const auto table = CoeffTable::build(config.params, config.n_steps + 1);
        if (config.track_w) {
            w_coeff.resize(config.n_steps + 1);
            for (std::uint64_t n = 1; n <= config.n_steps; ++n)
                w_coeff[n] = table.a_at(n) * table.a_at(n) / double(n);
        }
        if (config.track_qv) {
            qv_coeff.resize(config.n_steps + 1);
            for (std::uint64_t n = 1; n <= config.n_steps; ++n)
                qv_coeff[n] = table.a_at(n + 1) * table.a_at(n + 1);
        }
    }

    const double a = config.params.a;
    const double b = config.params.b;
    const StepKernel kernel(config.params);

    int workers = config.workers > 0 ? config.workers
                                     : int(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    const std::uint64_t n_traj = config.n_traj;
    constexpr std::uint64_t kBlock = 256;
    const std::uint64_t n_blocks = (n_traj + kBlock - 1) / kBlock;
    std::atomic<std::uint64_t> next_block{0};
    std::atomic<bool> corrupt{false};

    auto worker_fn = [&]() {
        Trajectory traj(config.params, config.n_steps);
        for (;;) {
            const std::uint64_t blk = next_block.fetch_add(1);
            if (blk >= n_blocks || corrupt.load(std::memory_order_relaxed)) break;
            const std::uint64_t lo = blk * kBlock;
            const std::uint64_t hi = std::min(lo + kBlock, n_traj);
            for (std::uint64_t t = lo; t < hi; ++t) {
                RngStream rng(trajectory_seed(config.master_seed, config.traj_offset + t));
                traj.reset();
                double w_acc = 0.0, qv_acc = 0.0;
                std::size_t cp = 0;
                for (std::uint64_t k = 1; k <= config.n_steps; ++k) {
                    advance(traj, kernel, rng);
                    if (config.track_w) w_acc += w_coeff[k] * double(traj.sigma2);
                    if (cp < n_cp && k == config.checkpoints[cp]) {
                        const std::size_t r = t * n_cp + cp;
                        for (int i = 0; i < d; ++i) {
                            summary.s[r * d + i] = traj.position[i];
                            summary.gram[r * d + i] = traj.gram_diag[i];
                        }
                        summary.sigma2[r] = traj.sigma2;
                        if (config.track_w) summary.w[r] = w_acc;
                        if (config.track_qv) summary.qv[r] = qv_acc;
                        ++cp;
                    }
                    if (config.track_qv) {
                        const double kk = double(k);
                        const double inc =
                            qv_coeff[k] * ((b / kk) * double(traj.sigma2) -
                                           (a / kk) * (a / kk) * double(traj.snorm2));
                        if (inc < 0.0) {
                            corrupt.store(true, std::memory_order_relaxed);
                            break;
                        }
                        qv_acc += inc;
                    }
                }
            }
        }
    };

    if (workers == 1) {
        worker_fn();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker_fn);
        for (auto& th : pool) th.join();
    }
    if (corrupt.load())
        throw NegativeIncrement("conditional covariance trace went negative during the ensemble");
    return summary;
}

EnsembleSummary merge(const EnsembleSummary& lo, const EnsembleSummary& hi) {
    if (lo.master_seed != hi.master_seed || lo.n_steps != hi.n_steps ||
        lo.checkpoints != hi.checkpoints || lo.params.d != hi.params.d ||
        lo.params.p != hi.params.p || lo.params.r != hi.params.r)
        throw ConfigInvalid("merge requires summaries from the same run configuration");
    if (hi.traj_offset != lo.traj_offset + lo.n_traj)
        throw ConfigInvalid("merge requires adjacent trajectory ranges");
    EnsembleSummary out = lo;
    out.n_traj += hi.n_traj;
    out.s.insert(out.s.end(), hi.s.begin(), hi.s.end());
    out.gram.insert(out.gram.end(), hi.gram.begin(), hi.gram.end());
    out.sigma2.insert(out.sigma2.end(), hi.sigma2.begin(), hi.sigma2.end());
    out.w.insert(out.w.end(), hi.w.begin(), hi.w.end());
    out.qv.insert(out.qv.end(), hi.qv.begin(), hi.qv.end());
    return out;
}

namespace {

TestReport two_sided(std::string name, double stat, double ref, double tol,
                     std::uint64_t n, std::string notes = {}) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = stat;
    r.reference = ref;
    r.tolerance = tol;
    r.pass = std::fabs(stat - ref) <= tol;
    r.sample_size = n;
    r.notes = std::move(notes);
    return r;
}

double bn_value(double b, std::uint64_t n) {
    double bn = 1.0;
    for (std::uint64_t k = 1; k < n; ++k) bn *= double(k) / (double(k) + b);
    return bn;
}

std::vector<double> sorted_copy(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

std::vector<TestReport> verify_gram_limit(const EnsembleSummary& summary,
                                          const VerifyTolerances& tol) {
    const std::uint64_t n = summary.checkpoints.back();
    if (n < 10'000)
        throw InsufficientHorizon("gram-limit verification needs a final horizon n >= 1e4");
    const std::size_t cp = summary.n_cp() - 1;
    const int d = summary.params.d;
    const double b = summary.params.b;
    const std::uint64_t N = summary.n_traj;
    const double nb = std::pow(double(n), b);

    std::vector<TestReport> reports;

    // (i) gram shares vs 1/d
    for (int i = 0; i < d; ++i) {
        std::vector<double> share(N);
        for (std::uint64_t t = 0; t < N; ++t) {
            const std::size_t r = summary.rec(t, cp);
            share[t] = double(summary.gram[r * d + i]) / double(summary.sigma2[r]);
        }
        const auto ms = mean_and_se(share);
        std::ostringstream name;
        name << "gram_share_axis_" << (i + 1);
        reports.push_back(
            two_sided(name.str(), ms.mean, 1.0 / double(d), tol.gram_share, N));
    }

    // (ii) moments of sigma_n^2 / n^b
    std::vector<double> z(N);
    for (std::uint64_t t = 0; t < N; ++t)
        z[t] = double(summary.sigma2[summary.rec(t, cp)]) / nb;
    {
        const auto ms = mean_and_se(z);
        const double exact_m1 = 1.0 / (nb * bn_value(b, n)); // E sigma_n^2 = 1/b_n
        reports.push_back(two_sided("ml_moment_1_exact", ms.mean, exact_m1,
                                    tol.se_multiplier * ms.se, N,
                                    "reference is the exact finite-n value 1/(n^b b_n)"));
    }
    for (int m = 2; m <= 3; ++m) {
        std::vector<double> zm(N);
        for (std::uint64_t t = 0; t < N; ++t) zm[t] = std::pow(z[t], m);
        const auto ms = mean_and_se(zm);
        const double ref = ml_moment(b, m);
        const double rel = m == 2 ? tol.ml_m2_rel : tol.ml_m3_rel;
        std::ostringstream name;
        name << "ml_moment_" << m;
        reports.push_back(two_sided(name.str(), ms.mean, ref, rel * ref, N,
                                    "asymptotic ML(b) moment; finite-n bias inside tolerance"));
    }

    // (iii) two-sample KS vs the ML(b) sampler
    {
        RngStream rng(mix64(summary.master_seed ^ 0x4d4c5245464d4c21ULL));
        std::vector<double> ref(tol.ml_draws);
        for (auto& x : ref) x = ml_sample(b, rng);
        std::sort(ref.begin(), ref.end());
        const auto zs = sorted_copy(z);
        const double ks = ks_two_sample(zs, ref);
        TestReport r;
        r.name = "ml_ks_two_sample";
        r.statistic = ks;
        r.reference = 0.0;
        r.tolerance = tol.ml_ks;
        r.pass = ks < tol.ml_ks;
        r.sample_size = N;
        r.notes = "sigma_n^2/n^b vs ML(b) sampler draws";
        reports.push_back(r);
    }
    return reports;
}

std::vector<TestReport> verify_clt(const EnsembleSummary& summary, const VerifyTolerances& tol) {
    const Regime regime = classify_regime(summary.params);
    if (regime == Regime::Superdiffusive)
        throw WrongRegime("self-normalized CLT holds in the diffusive and critical regimes");
    const std::uint64_t n = summary.checkpoints.back();
    if (n < 100'000)
        throw InsufficientHorizon("CLT verification needs a final horizon n >= 1e5");
    const std::size_t cp = summary.n_cp() - 1;
    const int d = summary.params.d;
    const std::uint64_t N = summary.n_traj;

    const bool diffusive = regime == Regime::Diffusive;
    const double var_ref =
        diffusive ? diffusive_variance(summary.params) : 1.0 / double(summary.params.d);
    const double var_rel = diffusive ? tol.clt_var_rel_diffusive : tol.clt_var_rel_critical;

    std::vector<TestReport> reports;
    std::vector<std::vector<double>> normalized(d);
    for (int i = 0; i < d; ++i) {
        std::vector<double>& x = normalized[i];
        x.resize(N);
        for (std::uint64_t t = 0; t < N; ++t) {
            const std::size_t r = summary.rec(t, cp);
            const double s2 = double(summary.sigma2[r]);
            const double denom = diffusive ? std::sqrt(s2) : std::sqrt(s2 * std::log(s2));
            x[t] = double(summary.s[r * d + i]) / denom;
        }
        const double var = sample_variance(x);
        std::ostringstream vname;
        vname << "clt_variance_axis_" << (i + 1);
        reports.push_back(two_sided(vname.str(), var, var_ref, var_rel * var_ref, N,
                                    diffusive ? "Var(S_n(i)/sqrt(sigma_n^2)) vs v^2"
                                              : "Var(S_n(i)/sqrt(sigma_n^2 log sigma_n^2)) vs 1/d"));

        std::vector<double> stud(N);
        const double scale = std::sqrt(var_ref);
        for (std::uint64_t t = 0; t < N; ++t) stud[t] = x[t] / scale;
        std::sort(stud.begin(), stud.end());
        const double ks = ks_one_sample(stud, [](double v) { return normal_cdf(v); });
        TestReport kr;
        std::ostringstream kname;
        kname << "clt_ks_axis_" << (i + 1);
        kr.name = kname.str();
        kr.statistic = ks;
        kr.tolerance = tol.clt_ks;
        kr.pass = ks < tol.clt_ks;
        kr.sample_size = N;
        kr.notes = "one-sample KS of the studentized coordinate vs N(0,1)";
        reports.push_back(kr);
    }

    // cross-coordinate correlations vanish in the limit
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const auto mi = mean_and_se(normalized[i]);
            const auto mj = mean_and_se(normalized[j]);
            double cov = 0.0;
            for (std::uint64_t t = 0; t < N; ++t)
                cov += (normalized[i][t] - mi.mean) * (normalized[j][t] - mj.mean);
            cov /= double(N - 1);
            const double rho = cov / std::sqrt(sample_variance(normalized[i]) *
                                               sample_variance(normalized[j]));
            std::ostringstream name;
            name << "clt_cross_corr_" << (i + 1) << "_" << (j + 1);
            reports.push_back(two_sided(name.str(), rho, 0.0, 3.0 / std::sqrt(double(N)), N));
        }
    }
    return reports;
}

std::vector<TestReport> verify_mixture_clt(const EnsembleSummary& summary,
                                           const VerifyTolerances& tol) {
    const Regime regime = classify_regime(summary.params);
    if (regime == Regime::Superdiffusive)
        throw WrongRegime("mixture law holds in the diffusive and critical regimes");
    const std::uint64_t n = summary.checkpoints.back();
    const std::size_t cp = summary.n_cp() - 1;
    const int d = summary.params.d;
    const double b = summary.params.b;
    const std::uint64_t N = summary.n_traj;
    const bool diffusive = regime == Regime::Diffusive;

    const double mixture_scale = diffusive ? diffusive_variance(summary.params)
                                           : b / double(d);
    const double var_ref = mixture_scale * ml_moment(b, 1); // v^2 E[Sigma'] etc.
    const double denom = diffusive ? std::pow(double(n), 0.5 * b)
                                   : std::sqrt(std::pow(double(n), b) * std::log(double(n)));

    std::vector<TestReport> reports;
    for (int i = 0; i < d; ++i) {
        std::vector<double> x(N);
        for (std::uint64_t t = 0; t < N; ++t)
            x[t] = double(summary.s[summary.rec(t, cp) * d + i]) / denom;
        const double var = sample_variance(x);
        std::ostringstream vname;
        vname << "mixture_variance_axis_" << (i + 1);
        reports.push_back(two_sided(vname.str(), var, var_ref, tol.mixture_var_rel * var_ref, N,
                                    "variance of the deterministically normalized coordinate"));

        const auto kurt = excess_kurtosis(x);
        const double m1 = ml_moment(b, 1);
        const double m2 = ml_moment(b, 2);
        TestReport kr;
        std::ostringstream kname;
        kname << "mixture_kurtosis_axis_" << (i + 1);
        kr.name = kname.str();
        kr.statistic = kurt.excess;
        kr.reference = 3.0 * (m2 / (m1 * m1) - 1.0); // kurtosis of the scale mixture
        kr.tolerance = tol.se_multiplier * kurt.se;
        kr.pass = kurt.excess > tol.se_multiplier * kurt.se;
        kr.sample_size = N;
        kr.notes = "one-sided: scale mixtures of normals are leptokurtic; SE by jackknife";
        reports.push_back(kr);
    }
    return reports;
}

std::vector<TestReport> verify_superdiffusive(const EnsembleSummary& summary,
                                              const VerifyTolerances& tol) {
    if (classify_regime(summary.params) != Regime::Superdiffusive)
        throw WrongRegime("superdiffusive verification requires 2a > b");
    const std::uint64_t far = summary.checkpoints.back();
    const std::size_t cp_far = summary.n_cp() - 1;
    const std::size_t cp_mid = summary.checkpoint_index(far / 10);
    const std::size_t cp_near = summary.checkpoint_index(far / 100);
    const int d = summary.params.d;
    const double a = summary.params.a;
    const std::uint64_t N = summary.n_traj;
    const double far_a = std::pow(double(far), a);
    const double mid_a = std::pow(double(far / 10), a);
    const double near_a = std::pow(double(far / 100), a);

    std::vector<TestReport> reports;
    const double cov_ref = expected_L_covariance_diag(summary.params);
    const double theta2 = superdiffusive_variance(summary.params);

    std::vector<std::vector<double>> lhat(d);
    for (int i = 0; i < d; ++i) {
        lhat[i].resize(N);
        for (std::uint64_t t = 0; t < N; ++t)
            lhat[i][t] = double(summary.s[summary.rec(t, cp_far) * d + i]) / far_a;
        const auto ms = mean_and_se(lhat[i]);
        std::ostringstream mname;
        mname << "L_mean_axis_" << (i + 1);
        reports.push_back(two_sided(mname.str(), ms.mean, 0.0, tol.se_multiplier * ms.se, N,
                                    "E[L] = 0"));

        std::vector<double> sq(N);
        for (std::uint64_t t = 0; t < N; ++t) sq[t] = lhat[i][t] * lhat[i][t];
        const auto m2 = mean_and_se(sq);
        std::ostringstream cname;
        cname << "L_cov_diag_axis_" << (i + 1);
        reports.push_back(two_sided(cname.str(), m2.mean, cov_ref,
                                    tol.superdiff_cov_rel * cov_ref, N,
                                    "diag of E[L L^T] = theta^2/((1-r) Gamma(2a))"));
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            std::vector<double> prod(N);
            for (std::uint64_t t = 0; t < N; ++t) prod[t] = lhat[i][t] * lhat[j][t];
            const auto ms = mean_and_se(prod);
            std::ostringstream name;
            name << "L_cov_offdiag_" << (i + 1) << "_" << (j + 1);
            reports.push_back(
                two_sided(name.str(), ms.mean, 0.0, tol.se_multiplier * ms.se, N));
        }

    // mean-square Cauchy decrease of S_m/m^a
    const auto mean_sq_gap = [&](std::size_t cp_hi, double scale_hi, std::size_t cp_lo,
                                 double scale_lo) {
        long double acc = 0.0L;
        for (std::uint64_t t = 0; t < N; ++t) {
            const std::size_t rh = summary.rec(t, cp_hi);
            const std::size_t rl = summary.rec(t, cp_lo);
            for (int i = 0; i < d; ++i) {
                const double gap = double(summary.s[rh * d + i]) / scale_hi -
                                   double(summary.s[rl * d + i]) / scale_lo;
                acc += gap * gap;
            }
        }
        return double(acc / (long double)N);
    };
    {
        const double d_far = mean_sq_gap(cp_far, far_a, cp_mid, mid_a);
        const double d_mid = mean_sq_gap(cp_mid, mid_a, cp_near, near_a);
        TestReport r;
        r.name = "cauchy_mean_square_decrease";
        r.statistic = d_far;
        r.reference = d_mid;
        r.tolerance = 0.0;
        r.pass = d_far < d_mid;
        r.sample_size = N;
        r.notes = "one-sided: E||S_m/m^a - S_{m/10}/(m/10)^a||^2 decreasing in m";
        reports.push_back(r);
    }

    // exact second-moment oracle at the middle horizon
    {
        const auto oracle = expected_outer(summary.params, far / 10);
        std::vector<double> norm2(N);
        for (std::uint64_t t = 0; t < N; ++t) {
            const std::size_t r = summary.rec(t, cp_mid);
            double s2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double si = double(summary.s[r * d + i]);
                s2 += si * si;
            }
            norm2[t] = s2 / (mid_a * mid_a);
        }
        const auto ms = mean_and_se(norm2);
        const double ref = double(d) * oracle.e_outer_diag / (mid_a * mid_a);
        reports.push_back(two_sided("outer_trace_oracle", ms.mean, ref,
                                    tol.se_multiplier * ms.se, N,
                                    "E||S_n||^2/n^{2a} vs the exact recursion"));
    }

    // Gaussian fluctuation around n^a L-hat at the near horizon
    for (int i = 0; i < d; ++i) {
        std::vector<double> stud(N);
        for (std::uint64_t t = 0; t < N; ++t) {
            const std::size_t r = summary.rec(t, cp_near);
            const double s2 = double(summary.sigma2[r]);
            stud[t] = (double(summary.s[r * d + i]) - near_a * lhat[i][t]) /
                      std::sqrt(theta2 * s2);
        }
        std::sort(stud.begin(), stud.end());
        const double ks = ks_one_sample(stud, [](double v) { return normal_cdf(v); });
        TestReport r;
        std::ostringstream name;
        name << "fluctuation_ks_axis_" << (i + 1);
        r.name = name.str();
        r.statistic = ks;
        r.tolerance = tol.fluct_ks;
        r.pass = ks < tol.fluct_ks;
        r.sample_size = N;
        r.notes = "KS vs N(0,1); tolerance includes the L-hat plug-in bias";
        reports.push_back(r);
    }
    return reports;
}

TestReport lil_monitor(const EnsembleSummary& summary, const VerifyTolerances& tol) {
    const Regime regime = classify_regime(summary.params);
    if (regime == Regime::Superdiffusive)
        throw WrongRegime("the iterated-logarithm monitor covers the diffusive and critical regimes");
    if (summary.checkpoints.back() < 10'000)
        throw InsufficientHorizon("LIL monitor needs a final horizon n >= 1e4");
    const int d = summary.params.d;
    const std::uint64_t N = summary.n_traj;
    const bool diffusive = regime == Regime::Diffusive;
    const double ref = diffusive ? double(d) * diffusive_variance(summary.params) : 1.0;

    double ensemble_max = 0.0;
    for (std::uint64_t t = 0; t < N; ++t) {
        double sup = 0.0;
        for (std::size_t c = 0; c < summary.n_cp(); ++c) {
            const std::size_t r = summary.rec(t, c);
            const double s2 = double(summary.sigma2[r]);
            double denom;
            if (diffusive) {
                const double ll = std::log(std::log(s2));
                if (!(ll > 0.0)) continue; // sigma^2 <= e
                denom = 2.0 * s2 * ll;
            } else {
                const double lll = std::log(std::log(std::log(s2)));
                if (!std::isfinite(lll) || !(lll > 0.0)) continue;
                denom = 2.0 * s2 * std::log(s2) * lll;
            }
            double norm2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double si = double(summary.s[r * d + i]);
                norm2 += si * si;
            }
            sup = std::max(sup, norm2 / denom);
        }
        ensemble_max = std::max(ensemble_max, sup);
    }

    TestReport r;
    r.name = diffusive ? "lil_band_diffusive" : "lil_band_critical";
    r.statistic = ensemble_max;
    r.reference = ref;
    r.tolerance = 0.0;
    r.pass = ensemble_max >= tol.lil_band_lo * ref && ensemble_max <= tol.lil_band_hi * ref;
    r.qualitative = true;
    r.sample_size = N;
    std::ostringstream notes;
    notes << "qualitative band [" << tol.lil_band_lo << ", " << tol.lil_band_hi
          << "] x ref; log log n is flat at desk scale";
    r.notes = notes.str();
    return r;
}

} // namespace merws
