#include "merws/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "merws/coefficients.hpp"
#include "merws/errors.hpp"
#include "merws/gof.hpp"
#include "merws/mittag.hpp"
#include "merws/oracle.hpp"
#include "merws/walk.hpp"

namespace merws {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::set<std::string> kExperiments = {
    "simulate", "gram-limit",  "clt",       "mixture-clt", "superdiffusive",
    "lil",      "oracle",      "enumerate", "ml-table",    "ml-sample",
    "coefftable"};

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw IoFailure("failed to write " + path);
}

ordered_json report_to_json(const TestReport& r) {
    ordered_json j;
    j["name"] = r.name;
    j["statistic"] = r.statistic;
    j["reference"] = r.reference;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["qualitative"] = r.qualitative;
    j["sample_size"] = r.sample_size;
    j["notes"] = r.notes;
    return j;
}

std::string reports_to_json(const std::vector<TestReport>& reports) {
    ordered_json j;
    j["criteria"] = ordered_json::array();
    for (const auto& r : reports) j["criteria"].push_back(report_to_json(r));
    return j.dump(2) + "\n";
}

ordered_json tolerances_to_json(const VerifyTolerances& t) {
    ordered_json j;
    j["se_multiplier"] = t.se_multiplier;
    j["gram_share"] = t.gram_share;
    j["ml_m2_rel"] = t.ml_m2_rel;
    j["ml_m3_rel"] = t.ml_m3_rel;
    j["ml_ks"] = t.ml_ks;
    j["ml_draws"] = t.ml_draws;
    j["clt_var_rel_diffusive"] = t.clt_var_rel_diffusive;
    j["clt_var_rel_critical"] = t.clt_var_rel_critical;
    j["clt_ks"] = t.clt_ks;
    j["mixture_var_rel"] = t.mixture_var_rel;
    j["fluct_ks"] = t.fluct_ks;
    j["superdiff_cov_rel"] = t.superdiff_cov_rel;
    j["lil_band_lo"] = t.lil_band_lo;
    j["lil_band_hi"] = t.lil_band_hi;
    return j;
}

ordered_json config_to_json_obj(const ExperimentConfig& c) {
    ordered_json j;
    j["dim"] = c.dim;
    if (c.p) j["p"] = *c.p;
    else j["p"] = nullptr;
    j["r"] = c.r;
    if (c.regime) j["regime"] = *c.regime;
    else j["regime"] = nullptr;
    j["allow_no_stops"] = c.allow_no_stops;
    j["steps"] = c.steps;
    j["trajectories"] = c.trajectories;
    j["seed"] = c.seed;
    j["checkpoint_ratio"] = c.checkpoint_ratio;
    j["checkpoint_list"] = c.checkpoint_list;
    j["experiment"] = c.experiment;
    j["out"] = c.out_dir;
    j["formats"] = c.formats;
    j["workers"] = c.workers;
    return j;
}

void write_metadata(const std::string& out_dir, const ExperimentConfig& config,
                    double wall_seconds, const VerifyTolerances& tol) {
    ordered_json j;
    j["config"] = config_to_json_obj(config);
    j["generator"] = kGeneratorName;
    j["version"] = kVersion;
    j["wall_clock_seconds"] = wall_seconds;
    j["tolerances"] = tolerances_to_json(tol);
    write_file(out_dir + "/metadata.json", j.dump(2) + "\n");
}

std::string trajectories_csv(const EnsembleSummary& s) {
    std::ostringstream os;
    const int d = s.params.d;
    os << "traj_id,n";
    for (int i = 1; i <= d; ++i) os << ",S_" << i;
    for (int i = 1; i <= d; ++i) os << ",gram_" << i;
    os << ",sigma2\n";
    for (std::uint64_t t = 0; t < s.n_traj; ++t) {
        for (std::size_t c = 0; c < s.n_cp(); ++c) {
            const std::size_t r = s.rec(t, c);
            os << (s.traj_offset + t) << ',' << s.checkpoints[c];
            for (int i = 0; i < d; ++i) os << ',' << s.s[r * d + i];
            for (int i = 0; i < d; ++i) os << ',' << s.gram[r * d + i];
            os << ',' << s.sigma2[r] << '\n';
        }
    }
    return os.str();
}

std::string summary_json(const EnsembleSummary& s) {
    ordered_json j;
    j["params"] = {{"dim", s.params.d}, {"p", s.params.p},      {"q", s.params.q},
                   {"r", s.params.r},   {"a", s.params.a},      {"b", s.params.b},
                   {"p_crit", s.params.p_crit},
                   {"regime", to_string(s.params.regime)}};
    j["n_steps"] = s.n_steps;
    j["trajectories"] = s.n_traj;
    j["master_seed"] = s.master_seed;
    j["generator"] = s.generator;
    j["checkpoints"] = ordered_json::array();
    const int d = s.params.d;
    for (std::size_t c = 0; c < s.n_cp(); ++c) {
        ordered_json jc;
        jc["n"] = s.checkpoints[c];
        std::vector<long double> mean_s(d, 0.0L);
        std::vector<long double> mean_share(d, 0.0L);
        long double mean_sig = 0.0L, mean_sig2 = 0.0L;
        std::vector<long double> outer((d * (d + 1)) / 2, 0.0L);
        for (std::uint64_t t = 0; t < s.n_traj; ++t) {
            const std::size_t r = s.rec(t, c);
            for (int i = 0; i < d; ++i) {
                mean_s[i] += double(s.s[r * d + i]);
                mean_share[i] += double(s.gram[r * d + i]) / double(s.sigma2[r]);
            }
            std::size_t k = 0;
            for (int i = 0; i < d; ++i)
                for (int jx = i; jx < d; ++jx)
                    outer[k++] += double(s.s[r * d + i]) * double(s.s[r * d + jx]);
            mean_sig += double(s.sigma2[r]);
            mean_sig2 += double(s.sigma2[r]) * double(s.sigma2[r]);
        }
        const long double n = s.n_traj;
        ordered_json means = ordered_json::array();
        ordered_json shares = ordered_json::array();
        for (int i = 0; i < d; ++i) {
            means.push_back(double(mean_s[i] / n));
            shares.push_back(double(mean_share[i] / n));
        }
        ordered_json cov = ordered_json::array();
        std::size_t k = 0;
        for (int i = 0; i < d; ++i)
            for (int jx = i; jx < d; ++jx) {
                ordered_json e;
                e["i"] = i + 1;
                e["j"] = jx + 1;
                e["second_moment"] = double(outer[k++] / n);
                cov.push_back(e);
            }
        jc["mean_S"] = means;
        jc["gram_shares"] = shares;
        jc["outer_moments"] = cov;
        jc["mean_sigma2"] = double(mean_sig / n);
        const long double var = mean_sig2 / n - (mean_sig / n) * (mean_sig / n);
        jc["var_sigma2"] = double(var);
        j["checkpoints"].push_back(jc);
    }
    return j.dump(2) + "\n";
}

ModelParams default_set(Regime regime) {
    switch (regime) {
    case Regime::Diffusive: return derive_params(2, 0.4, 0.2);
    case Regime::Critical: return derive_params(2, 0.5, 0.2);
    case Regime::Superdiffusive: return derive_params(2, 0.9, 0.05);
    }
    throw ConfigInvalid("unknown regime");
}

} // namespace

void ExperimentConfig::validate() const {
    if (kExperiments.find(experiment) == kExperiments.end())
        throw ConfigInvalid("experiment: unknown name '" + experiment + "'");
    if (dim < 1 || dim > 63)
        throw ConfigInvalid("dim: must lie in [1, 63]");
    const bool needs_walk = experiment != "ml-table" && experiment != "ml-sample" &&
                            experiment != "oracle" && experiment != "enumerate" &&
                            experiment != "coefftable";
    if (!p && !regime && experiment != "ml-table" && experiment != "ml-sample")
        throw ConfigInvalid("p: required unless --regime is given");
    if (regime) regime_from_string(*regime); // validates the name
    if (needs_walk) {
        if (steps < 1) throw ConfigInvalid("steps: must be >= 1");
        if (trajectories < 1) throw ConfigInvalid("trajectories: must be >= 1");
    }
    if (experiment == "enumerate" && (steps < 1 || steps > 6))
        throw ConfigInvalid("steps: exhaustive enumeration supports 1 <= steps <= 6");
    for (const auto& f : formats)
        if (f != "csv" && f != "json")
            throw ConfigInvalid("format: expected csv or json, got '" + f + "'");
    if (workers < 0) throw ConfigInvalid("workers: must be >= 0");
}

ModelParams ExperimentConfig::resolve_params() const {
    double pp;
    if (regime) {
        pp = solve_p_for_regime(dim, r, regime_from_string(*regime));
    } else if (p) {
        pp = *p;
    } else {
        throw ConfigInvalid("p: required unless --regime is given");
    }
    return derive_params(dim, pp, r, allow_no_stops);
}

std::vector<std::uint64_t> ExperimentConfig::resolve_checkpoints() const {
    if (!checkpoint_list.empty()) return checkpoint_list;
    return geometric_checkpoints(steps, checkpoint_ratio);
}

std::string config_to_json(const ExperimentConfig& config) {
    return config_to_json_obj(config).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigInvalid(std::string("config JSON parse error: ") + e.what());
    }
    ExperimentConfig c;
    try {
        c.dim = j.at("dim").get<int>();
        if (!j.at("p").is_null()) c.p = j.at("p").get<double>();
        c.r = j.at("r").get<double>();
        if (!j.at("regime").is_null()) c.regime = j.at("regime").get<std::string>();
        c.allow_no_stops = j.value("allow_no_stops", false);
        c.steps = j.at("steps").get<std::uint64_t>();
        c.trajectories = j.at("trajectories").get<std::uint64_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.checkpoint_ratio = j.value("checkpoint_ratio", 0.0);
        c.checkpoint_list = j.value("checkpoint_list", std::vector<std::uint64_t>{});
        c.experiment = j.at("experiment").get<std::string>();
        c.out_dir = j.value("out", std::string("out"));
        c.formats = j.value("formats", std::vector<std::string>{"csv", "json"});
        c.workers = j.value("workers", 0);
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigInvalid(std::string("config field error: ") + e.what());
    }
    return c;
}

std::vector<std::uint64_t> derive_worker_streams(std::uint64_t master_seed,
                                                 std::uint64_t n_traj) {
    std::vector<std::uint64_t> seeds(n_traj);
    for (std::uint64_t i = 0; i < n_traj; ++i) seeds[i] = trajectory_seed(master_seed, i);
    return seeds;
}

std::vector<TestReport> verify_exact_moments(const EnsembleSummary& summary,
                                             std::uint64_t outer_n,
                                             const VerifyTolerances& tol) {
    const int d = summary.params.d;
    const std::uint64_t N = summary.n_traj;
    std::vector<TestReport> reports;

    // E[b_n sigma_n^2] = 1 at every checkpoint
    for (std::size_t c = 0; c < summary.n_cp(); ++c) {
        const std::uint64_t n = summary.checkpoints[c];
        double bn = 1.0;
        for (std::uint64_t k = 1; k < n; ++k) bn *= double(k) / (double(k) + summary.params.b);
        std::vector<double> z(N);
        for (std::uint64_t t = 0; t < N; ++t)
            z[t] = bn * double(summary.sigma2[summary.rec(t, c)]);
        const auto ms = mean_and_se(z);
        std::ostringstream name;
        name << "martingale_mean_n_" << n;
        TestReport r;
        r.name = name.str();
        r.statistic = ms.mean;
        r.reference = 1.0;
        r.tolerance = tol.se_multiplier * ms.se;
        r.pass = std::fabs(ms.mean - 1.0) <= r.tolerance;
        r.sample_size = N;
        r.notes = "E[b_n sigma_n^2] = 1 exactly at every n";
        reports.push_back(r);
    }

    // second-moment oracle at outer_n
    const std::size_t c = summary.checkpoint_index(outer_n);
    const auto table = expected_outer(summary.params, outer_n);
    for (int i = 0; i < d; ++i) {
        std::vector<double> sq(N);
        for (std::uint64_t t = 0; t < N; ++t) {
            const double si = double(summary.s[summary.rec(t, c) * d + i]);
            sq[t] = si * si;
        }
        const auto ms = mean_and_se(sq);
        std::ostringstream name;
        name << "outer_diag_axis_" << (i + 1) << "_n_" << outer_n;
        TestReport r;
        r.name = name.str();
        r.statistic = ms.mean;
        r.reference = table.e_outer_diag;
        r.tolerance = tol.se_multiplier * ms.se;
        r.pass = std::fabs(ms.mean - r.reference) <= r.tolerance;
        r.sample_size = N;
        r.notes = "E[S_n(i)^2] vs the exact recursion";
        reports.push_back(r);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            std::vector<double> prod(N);
            for (std::uint64_t t = 0; t < N; ++t) {
                const std::size_t rr = summary.rec(t, c);
                prod[t] = double(summary.s[rr * d + i]) * double(summary.s[rr * d + j]);
            }
            const auto ms = mean_and_se(prod);
            std::ostringstream name;
            name << "outer_offdiag_" << (i + 1) << "_" << (j + 1) << "_n_" << outer_n;
            TestReport r;
            r.name = name.str();
            r.statistic = ms.mean;
            r.reference = 0.0;
            r.tolerance = tol.se_multiplier * ms.se;
            r.pass = std::fabs(ms.mean) <= r.tolerance;
            r.sample_size = N;
            r.notes = "off-diagonals of E[S_n S_n^T] vanish by symmetry";
            reports.push_back(r);
        }
    return reports;
}

std::vector<TestReport> verify_enumeration(const ModelParams& params, std::uint64_t n,
                                           std::uint64_t n_traj, std::uint64_t master_seed,
                                           int workers, const VerifyTolerances& tol) {
    const auto law = enumerate_distribution(params, n);
    const int d = params.d;
    std::vector<TestReport> reports;

    // marginal law on (S, sigma2): the pinned acceptance support
    struct Key {
        std::array<std::int64_t, 2> s;
        std::uint64_t sigma2;
        bool operator<(const Key& o) const {
            if (s != o.s) return s < o.s;
            return sigma2 < o.sigma2;
        }
    };
    std::map<Key, double> marginal;
    for (const auto& atom : law.atoms) marginal[Key{atom.s, atom.sigma2}] += atom.prob;

    EnsembleConfig ec;
    ec.params = params;
    ec.n_steps = n;
    ec.n_traj = n_traj;
    ec.master_seed = master_seed;
    ec.checkpoints = {n};
    ec.workers = workers;
    const auto summary = ensemble_run(ec);

    std::map<Key, std::uint64_t> observed;
    for (std::uint64_t t = 0; t < n_traj; ++t) {
        Key k{};
        const std::size_t r = summary.rec(t, 0);
        for (int i = 0; i < d; ++i) k.s[i] = summary.s[r * d + i];
        k.sigma2 = summary.sigma2[r];
        ++observed[k];
    }

    std::uint64_t outside = 0;
    for (const auto& [k, cnt] : observed)
        if (marginal.find(k) == marginal.end()) outside += cnt;

    // Pearson chi-square with expected counts >= 5 (small cells pooled)
    std::vector<std::pair<double, double>> cells; // (observed, expected)
    double pool_obs = 0.0, pool_exp = 0.0;
    for (const auto& [k, prob] : marginal) {
        const double expd = prob * double(n_traj);
        const auto it = observed.find(k);
        const double obs = it == observed.end() ? 0.0 : double(it->second);
        if (expd >= 5.0) cells.emplace_back(obs, expd);
        else {
            pool_obs += obs;
            pool_exp += expd;
        }
    }
    if (pool_exp >= 5.0) cells.emplace_back(pool_obs, pool_exp);
    else if (pool_exp > 0.0 && !cells.empty()) {
        cells.back().first += pool_obs;
        cells.back().second += pool_exp;
    }
    std::vector<double> obs_v, exp_v;
    for (const auto& [o, e] : cells) {
        obs_v.push_back(o);
        exp_v.push_back(e);
    }
    const double stat = chi_square_stat(obs_v, exp_v);
    const double pval = chi_square_pvalue(stat, double(obs_v.size() - 1));
    {
        TestReport r;
        std::ostringstream name;
        name << "enumeration_chi_square_d" << d << "_n" << n;
        r.name = name.str();
        r.statistic = pval;
        r.reference = 1.0;
        r.tolerance = 0.0;
        r.pass = pval > 0.001 && outside == 0;
        r.sample_size = n_traj;
        std::ostringstream notes;
        notes << "one-sided: p > 0.001 over " << obs_v.size() << " cells; "
              << outside << " draws outside the exact support";
        r.notes = notes.str();
        reports.push_back(r);
    }

    // enumerated moments vs the oracle, 1e-12
    const double mass = law.total_mass();
    const auto oracle = expected_outer(params, n);
    const auto close = [](double x, double ref) {
        return std::fabs(x - ref) <= 1e-12 * std::max(1.0, std::fabs(ref));
    };
    {
        TestReport r;
        std::ostringstream name;
        name << "enumeration_moments_d" << d << "_n" << n;
        r.name = name.str();
        bool ok = close(mass, 1.0) && close(law.mean_sigma2(), oracle.e_sigma2);
        double worst = std::fabs(mass - 1.0);
        worst = std::max(worst, std::fabs(law.mean_sigma2() - oracle.e_sigma2));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double ref = i == j ? oracle.e_outer_diag : 0.0;
                const double got = law.outer_moment(i, j);
                ok = ok && close(got, ref);
                worst = std::max(worst, std::fabs(got - ref));
            }
        r.statistic = worst;
        r.reference = 0.0;
        r.tolerance = 1e-12;
        r.pass = ok;
        r.sample_size = law.atoms.size();
        r.notes = "largest deviation of mass/means/outer moments vs the oracle";
        reports.push_back(r);
    }
    return reports;
}

namespace {

RunResult finish_run(const std::string& out_dir, const ExperimentConfig& config,
                     std::vector<TestReport> reports, const VerifyTolerances& tol,
                     std::chrono::steady_clock::time_point t0, bool write_report) {
    RunResult result;
    result.reports = std::move(reports);
    result.report_json = reports_to_json(result.reports);
    if (write_report) write_file(out_dir + "/report.json", result.report_json);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_metadata(out_dir, config, wall, tol);
    result.exit_status = 0;
    for (const auto& r : result.reports)
        if (!r.qualitative && !r.pass) result.exit_status = 1;
    return result;
}

} // namespace

RunResult run(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const VerifyTolerances tol;
    std::filesystem::create_directories(config.out_dir);
    const std::string& out = config.out_dir;
    const bool want_csv =
        std::find(config.formats.begin(), config.formats.end(), "csv") != config.formats.end();

    const auto& exp = config.experiment;
    if (exp == "ml-table" || exp == "ml-sample") {
        const double alpha = 1.0 - config.r;
        if (!(alpha > 0.0 && alpha < 1.0))
            throw ConfigInvalid("r: Mittag-Leffler experiments need alpha = 1-r in (0,1)");
        if (exp == "ml-table") {
            std::ostringstream pdf;
            pdf << "x,pdf\n";
            for (double x = 0.05; x <= 50.0; x += 0.05) {
                try {
                    pdf << format_real(x) << ',' << format_real(ml_pdf(alpha, x)) << '\n';
                } catch (const OutOfEvaluationRange&) {
                    break; // end of the certified domain
                }
            }
            std::ostringstream mom;
            mom << "m,moment\n";
            for (int m = 0; m <= 10; ++m)
                mom << m << ',' << format_real(ml_moment(alpha, m)) << '\n';
            if (want_csv) {
                write_file(out + "/ml_pdf.csv", pdf.str());
                write_file(out + "/ml_moments.csv", mom.str());
            }
        } else {
            RngStream rng(mix64(config.seed));
            std::ostringstream os;
            os << "sample\n";
            const std::uint64_t count = config.trajectories ? config.trajectories : 100000;
            for (std::uint64_t i = 0; i < count; ++i)
                os << format_real(ml_sample(alpha, rng)) << '\n';
            if (want_csv) write_file(out + "/samples.csv", os.str());
        }
        return finish_run(out, config, {}, tol, t0, false);
    }

    if (exp == "coefftable") {
        const auto params = config.resolve_params();
        const auto cps = config.resolve_checkpoints();
        const auto vn = vn_partial_sums(params.a, params.b, config.steps);
        const auto table = CoeffTable::build(params, config.steps);
        std::ostringstream os;
        os << "n,a_n,b_n,v_n\n";
        for (auto n : cps)
            os << n << ',' << format_real(table.a_at(n)) << ',' << format_real(table.b_at(n))
               << ',' << format_real(vn[n - 1]) << '\n';
        if (want_csv) write_file(out + "/coefftable.csv", os.str());
        return finish_run(out, config, {}, tol, t0, false);
    }

    if (exp == "oracle") {
        const auto params = config.resolve_params();
        const auto cps = config.resolve_checkpoints();
        const auto grid = expected_outer_grid(params, cps);
        std::ostringstream os;
        os << "n,e_sigma2,e_gram_diag,e_outer_diag\n";
        for (const auto& row : grid)
            os << row.n << ',' << format_real(row.e_sigma2) << ','
               << format_real(row.e_gram_diag) << ',' << format_real(row.e_outer_diag) << '\n';
        if (want_csv) write_file(out + "/oracle.csv", os.str());
        return finish_run(out, config, {}, tol, t0, false);
    }

    if (exp == "enumerate") {
        const auto params = config.resolve_params();
        const auto law = enumerate_distribution(params, config.steps);
        std::map<std::pair<std::array<std::int64_t, 2>, std::uint64_t>, double> marginal;
        for (const auto& atom : law.atoms)
            marginal[{atom.s, atom.sigma2}] += atom.prob;
        std::ostringstream os;
        for (int i = 1; i <= params.d; ++i) os << "S_" << i << ',';
        os << "sigma2,probability\n";
        for (const auto& [key, prob] : marginal) {
            for (int i = 0; i < params.d; ++i) os << key.first[i] << ',';
            os << key.second << ',' << format_real(prob) << '\n';
        }
        if (want_csv) write_file(out + "/law.csv", os.str());
        return finish_run(out, config, {}, tol, t0, false);
    }

    // ensemble-backed experiments
    const auto params = config.resolve_params();
    EnsembleConfig ec;
    ec.params = params;
    ec.n_steps = config.steps;
    ec.n_traj = config.trajectories;
    ec.master_seed = config.seed;
    ec.workers = config.workers;
    if (!config.checkpoint_list.empty()) {
        ec.checkpoints = config.checkpoint_list;
    } else if (exp == "superdiffusive") {
        ec.checkpoints = {config.steps / 100, config.steps / 10, config.steps};
    } else if (exp == "gram-limit" || exp == "clt" || exp == "mixture-clt") {
        ec.checkpoints = {config.steps};
    } else {
        ec.checkpoints = config.resolve_checkpoints();
    }

    const auto summary = ensemble_run(ec);
    std::vector<TestReport> reports;
    if (exp == "gram-limit") reports = verify_gram_limit(summary, tol);
    else if (exp == "clt") reports = verify_clt(summary, tol);
    else if (exp == "mixture-clt") reports = verify_mixture_clt(summary, tol);
    else if (exp == "superdiffusive") reports = verify_superdiffusive(summary, tol);
    else if (exp == "lil") reports.push_back(lil_monitor(summary, tol));

    if (want_csv && (exp == "simulate" || exp == "lil"))
        write_file(out + "/trajectories.csv", trajectories_csv(summary));
    write_file(out + "/summary.json", summary_json(summary));
    return finish_run(out, config, std::move(reports), tol, t0, exp != "simulate");
}

RunResult verify_all(std::uint64_t seed, int workers, const std::string& out_dir,
                     bool write_artifacts) {
    const auto t0 = std::chrono::steady_clock::now();
    const VerifyTolerances tol;
    if (write_artifacts) std::filesystem::create_directories(out_dir);

    std::vector<TestReport> all;
    const auto add = [&all](const std::string& tag, std::vector<TestReport> reports) {
        for (auto& r : reports) {
            r.name = tag + ":" + r.name;
            all.push_back(std::move(r));
        }
    };

    // criteria 1-2: exact moment identities, one run per regime
    const Regime regimes[] = {Regime::Diffusive, Regime::Critical, Regime::Superdiffusive};
    for (const Regime regime : regimes) {
        EnsembleConfig ec;
        ec.params = default_set(regime);
        ec.n_steps = 10'000;
        ec.n_traj = 100'000;
        ec.master_seed = mix64(seed ^ (0x100 + std::uint64_t(regime)));
        ec.checkpoints = {100, 1'000, 10'000};
        ec.workers = workers;
        const auto summary = ensemble_run(ec);
        add("C1-C2_" + to_string(regime), verify_exact_moments(summary, 1'000, tol));
    }

    // criterion 3: brute-force equivalence
    add("C3_d1", verify_enumeration(derive_params(1, 0.5, 0.2), 4, 1'000'000,
                                    mix64(seed ^ 0x301), workers, tol));
    add("C3_d2", verify_enumeration(derive_params(2, 0.5, 0.2), 3, 1'000'000,
                                    mix64(seed ^ 0x302), workers, tol));

    // criterion 4: Gram / Mittag-Leffler limit
    {
        EnsembleConfig ec;
        ec.params = derive_params(2, 0.55, 0.2);
        ec.n_steps = 100'000;
        ec.n_traj = 10'000;
        ec.master_seed = mix64(seed ^ 0x400);
        ec.checkpoints = {100'000};
        ec.workers = workers;
        add("C4", verify_gram_limit(ensemble_run(ec), tol));
    }

    // criteria 5 and 7: diffusive CLT and the mixture law, one ensemble
    {
        EnsembleConfig ec;
        ec.params = default_set(Regime::Diffusive);
        ec.n_steps = 100'000;
        ec.n_traj = 10'000;
        ec.master_seed = mix64(seed ^ 0x500);
        ec.checkpoints = {100'000};
        ec.workers = workers;
        const auto summary = ensemble_run(ec);
        add("C5", verify_clt(summary, tol));
        add("C7", verify_mixture_clt(summary, tol));
    }

    // criterion 6: critical CLT
    {
        EnsembleConfig ec;
        ec.params = default_set(Regime::Critical);
        ec.n_steps = 100'000;
        ec.n_traj = 10'000;
        ec.master_seed = mix64(seed ^ 0x600);
        ec.checkpoints = {100'000};
        ec.workers = workers;
        add("C6", verify_clt(ensemble_run(ec), tol));
    }

    // criteria 8-9: superdiffusive limit and Gaussian fluctuation
    {
        EnsembleConfig ec;
        ec.params = default_set(Regime::Superdiffusive);
        ec.n_steps = 1'000'000;
        ec.n_traj = 10'000;
        ec.master_seed = mix64(seed ^ 0x800);
        ec.checkpoints = {10'000, 100'000, 1'000'000};
        ec.workers = workers;
        add("C8-C9", verify_superdiffusive(ensemble_run(ec), tol));
    }

    // criterion 11: qualitative LIL band
    for (const Regime regime : {Regime::Diffusive, Regime::Critical}) {
        EnsembleConfig ec;
        ec.params = default_set(regime);
        ec.n_steps = 1'000'000;
        ec.n_traj = 1'000;
        ec.master_seed = mix64(seed ^ (0xB00 + std::uint64_t(regime)));
        ec.checkpoints = geometric_checkpoints(ec.n_steps);
        ec.workers = workers;
        add("C11", {lil_monitor(ensemble_run(ec), tol)});
    }

    RunResult result;
    result.reports = std::move(all);
    result.report_json = reports_to_json(result.reports);
    result.exit_status = 0;
    for (const auto& r : result.reports)
        if (!r.qualitative && !r.pass) result.exit_status = 1;

    if (write_artifacts) {
        write_file(out_dir + "/report.json", result.report_json);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ordered_json meta;
        meta["suite"] = "verify-all";
        meta["seed"] = seed;
        meta["workers"] = workers;
        meta["generator"] = kGeneratorName;
        meta["version"] = kVersion;
        meta["wall_clock_seconds"] = wall;
        meta["tolerances"] = tolerances_to_json(tol);
        write_file(out_dir + "/metadata.json", meta.dump(2) + "\n");
    }
    return result;
}

} // namespace merws
