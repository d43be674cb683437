#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfg/deep/trainer.hpp"
#include "mfg/exact/fictitious_play.hpp"
#include "mfg/exact/mirror_descent.hpp"
#include "mfg/harness/config.hpp"
#include "mfg/harness/distribution_sets.hpp"
#include "mfg/neural/checkpoint.hpp"

namespace mfg::harness {

namespace fs = std::filesystem;

inline constexpr const char* kMetricsSchema = "# mfg-metrics v1";

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

inline void write_failure_record(const fs::path& run_dir, std::uint64_t seed,
                                 const std::string& phase, const std::string& message) {
    std::error_code ec;
    fs::create_directories(run_dir, ec);
    std::ofstream out(run_dir / "failure.json");
    out << "{\n  \"seed\": " << seed << ",\n  \"phase\": \"" << json_escape(phase)
        << "\",\n  \"error\": \"" << json_escape(message) << "\"\n}\n";
}

inline void write_metrics_csv(const fs::path& path, std::uint64_t seed,
                              const std::vector<deep::IterationMetrics>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << kMetricsSchema << "\n";
    const std::size_t num_mu0 =
        rows.empty() ? 0 : rows.front().per_mu0_exploitability.size();
    out << "iteration,seed,mean_exploitability";
    for (std::size_t i = 0; i < num_mu0; ++i) out << ",expl_mu0_" << i;
    out << ",loss_mean,loss_max,env_steps,gradient_updates,wall_seconds,model_params,"
           "model_bytes\n";
    for (const auto& m : rows) {
        out << m.iteration << ',' << seed << ',' << fmt(m.mean_exploitability);
        for (double e : m.per_mu0_exploitability) out << ',' << fmt(e);
        out << ',' << fmt(m.loss_mean) << ',' << fmt(m.loss_max) << ',' << m.env_steps << ','
            << m.gradient_updates << ',' << fmt(m.wall_seconds) << ',' << m.stored_params
            << ',' << m.stored_params * 8 << "\n";
    }
}

}  // namespace detail

// --- tabular policy checkpoints ---------------------------------------------

inline void save_tabular_policy(const fs::path& path, const TabularPolicy& policy) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "mfg-tabular-policy 1\n";
    out << "shape " << policy.horizon() << ' ' << policy.num_states() << ' '
        << policy.num_actions() << "\n";
    char buf[40];
    for (int n = 0; n <= policy.horizon(); ++n)
        for (int x = 0; x < policy.num_states(); ++x) {
            const auto row = policy.row(n, x);
            for (std::size_t a = 0; a < row.size(); ++a) {
                std::snprintf(buf, sizeof(buf), "%.17g", row[a]);
                out << (a ? " " : "") << buf;
            }
            out << "\n";
        }
}

inline TabularPolicy load_tabular_policy(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string magic, key;
    int version = 0;
    in >> magic >> version >> key;
    if (magic != "mfg-tabular-policy" || version != 1 || key != "shape")
        throw std::runtime_error("unrecognized tabular policy file " + path.string());
    int horizon = 0, num_states = 0, num_actions = 0;
    in >> horizon >> num_states >> num_actions;
    TabularPolicy policy(horizon, num_states, num_actions);
    for (int n = 0; n <= horizon; ++n)
        for (int x = 0; x < num_states; ++x)
            for (auto& v : policy.row(n, x))
                if (!(in >> v)) throw std::runtime_error("truncated tabular policy file");
    policy.validate();
    return policy;
}

// --- the experiment driver ---------------------------------------------------

struct SeedRunInfo {
    std::uint64_t seed = 0;
    fs::path dir;
    std::vector<double> mean_exploitability;  // one entry per iteration
};

struct ExperimentOutcome {
    std::string hash;
    std::vector<SeedRunInfo> runs;
    fs::path summary_path;
};

namespace detail {

inline std::vector<deep::IterationMetrics> tabular_rows(const std::vector<double>& trace,
                                                        std::int64_t table_params,
                                                        double wall_total) {
    std::vector<deep::IterationMetrics> rows;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        deep::IterationMetrics m;
        m.iteration = static_cast<int>(i) + 1;
        m.mean_exploitability = trace[i];
        m.per_mu0_exploitability = {trace[i]};
        m.stored_params = table_params;
        m.wall_seconds = wall_total / static_cast<double>(trace.size());
        rows.push_back(std::move(m));
    }
    return rows;
}

inline std::vector<deep::IterationMetrics> run_one_seed(const ExperimentConfig& config,
                                                        std::uint64_t seed,
                                                        const fs::path& run_dir) {
    const auto env = build_env(config.env);
    const auto dists = generate_distribution_set(config.train_dists, env->state_space());

    if (is_tabular_algorithm(config.algorithm)) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> trace;
        TabularPolicy final_policy;
        if (config.algorithm == "tabular-fp") {
            auto fp = exact::fp_run(*env, dists.front(), config.train.iterations);
            trace = std::move(fp.exploitability_trace);
            final_policy = std::move(fp.average_policy);
        } else {
            auto omd = exact::omd_run(*env, dists.front(), config.train.omd_tau,
                                      config.train.iterations);
            trace = std::move(omd.exploitability_trace);
            final_policy = std::move(omd.policy);
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        save_tabular_policy(run_dir / "policy_final.tab", final_policy);
        const std::int64_t table_params = static_cast<std::int64_t>(final_policy.horizon() + 1) *
                                          final_policy.num_states() *
                                          final_policy.num_actions();
        return tabular_rows(trace, table_params, wall);
    }

    deep::TrainConfig train = config.train;
    train.variant = deep::parse_variant(config.algorithm);
    train.seed = seed;

    const fs::path ckpt_dir = run_dir / "checkpoints";
    fs::create_directories(ckpt_dir);
    deep::TrainHooks hooks;
    const std::string hash = config_hash(config);
    hooks.on_checkpoint = [&](int iteration, const neural::MlpParams& net) {
        char name[32];
        std::snprintf(name, sizeof(name), "iter_%04d.net", iteration);
        neural::save_mlp(ckpt_dir / name, net, {seed, iteration, hash});
    };

    deep::DeepTrainResult result;
    switch (train.variant) {
        case deep::Variant::momd:
            result = deep::momd_train(*env, dists, train, hooks);
            break;
        case deep::Variant::vomd1:
        case deep::Variant::vomd2:
            result = deep::vomd_train(*env, dists, train, hooks);
            break;
        case deep::Variant::vfp:
            result = deep::fp_deep_train(*env, dists, train, false, hooks);
            break;
        case deep::Variant::mfp:
            result = deep::fp_deep_train(*env, dists, train, true, hooks);
            break;
    }
    return std::move(result.metrics);
}

}  // namespace detail

/// Executes the configured algorithm once per seed. Each run owns a directory
/// named by (config hash, seed); existing directories are refused. Writes the
/// canonical config, per-iteration metrics, checkpoints, and a cross-seed
/// mean/std summary.
inline ExperimentOutcome run_experiment(const ExperimentConfig& config) {
    validate_experiment_config(config);
    const std::string hash = config_hash(config);
    const std::string short_hash = hash.substr(0, 12);

    ExperimentOutcome outcome;
    outcome.hash = hash;
    fs::create_directories(config.outdir);

    for (std::uint64_t seed : config.seeds) {
        const fs::path run_dir =
            fs::path(config.outdir) / (short_hash + "-s" + std::to_string(seed));
        if (fs::exists(run_dir))
            throw std::invalid_argument("run directory already exists: " + run_dir.string());
        fs::create_directories(run_dir);
        {
            std::ofstream cfg(run_dir / "config.ini");
            cfg << serialize_experiment_config(config);
        }
        std::vector<deep::IterationMetrics> rows;
        try {
            rows = detail::run_one_seed(config, seed, run_dir);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            detail::write_failure_record(run_dir, seed, "train", e.what());
            throw std::runtime_error("run failed (seed " + std::to_string(seed) +
                                     "): " + e.what());
        }
        detail::write_metrics_csv(run_dir / "metrics.csv", seed, rows);
        SeedRunInfo info;
        info.seed = seed;
        info.dir = run_dir;
        for (const auto& m : rows) info.mean_exploitability.push_back(m.mean_exploitability);
        outcome.runs.push_back(std::move(info));
    }

    // Cross-seed aggregate, one row per iteration.
    const fs::path summary = fs::path(config.outdir) / (short_hash + "-summary.csv");
    std::ofstream out(summary);
    out << kMetricsSchema << "\n";
    out << "iteration,mean_exploitability_mean,mean_exploitability_std,n_seeds\n";
    const std::size_t iterations =
        outcome.runs.empty() ? 0 : outcome.runs.front().mean_exploitability.size();
    for (std::size_t i = 0; i < iterations; ++i) {
        double mean = 0.0;
        for (const auto& run : outcome.runs) mean += run.mean_exploitability[i];
        mean /= static_cast<double>(outcome.runs.size());
        double var = 0.0;
        for (const auto& run : outcome.runs) {
            const double d = run.mean_exploitability[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(outcome.runs.size());
        out << (i + 1) << ',' << detail::fmt(mean) << ',' << detail::fmt(std::sqrt(var)) << ','
            << outcome.runs.size() << "\n";
    }
    outcome.summary_path = summary;
    return outcome;
}

// --- policy reconstruction from a run directory ------------------------------

inline AnyPolicy load_policy_from_run(const fs::path& run_dir, const ExperimentConfig& config,
                                      const EnvModel& model, int iteration = -1) {
    if (is_tabular_algorithm(config.algorithm))
        return load_tabular_policy(run_dir / "policy_final.tab");

    const deep::Variant variant = deep::parse_variant(config.algorithm);
    const ObsEncoding encoding = deep::encoding_for(variant);
    const fs::path ckpt_dir = run_dir / "checkpoints";
    const int last = iteration > 0 ? iteration : config.train.iterations;

    auto ckpt_name = [](int k) {
        char name[32];
        std::snprintf(name, sizeof(name), "iter_%04d.net", k);
        return std::string(name);
    };

    if (variant == deep::Variant::vfp || variant == deep::Variant::mfp) {
        std::vector<neural::MlpParams> nets;
        for (int k = 1; k <= last; ++k) nets.push_back(neural::load_mlp(ckpt_dir / ckpt_name(k)));
        return deep::FpMixturePolicy(std::move(nets), encoding, model.horizon());
    }
    neural::MlpParams net = neural::load_mlp(ckpt_dir / ckpt_name(last));
    return deep::SoftmaxQPolicy(std::move(net), config.train.omd_tau, encoding,
                                model.horizon());
}

// --- density export -----------------------------------------------------------

/// Exact per-timestep density tables under a policy; one table per requested
/// timestep, indexed by dense state.
template <ActionPolicy P>
std::vector<std::vector<double>> density_tables(const P& policy, const Distribution& mu0,
                                                const EnvModel& model,
                                                const std::vector<int>& timesteps) {
    for (int t : timesteps)
        if (t < 0 || t > model.horizon())
            throw std::invalid_argument("density_tables: timestep outside horizon");
    const MeanFieldFlow flow = induce_flow(mu0, policy, model);
    std::vector<std::vector<double>> tables;
    tables.reserve(timesteps.size());
    for (int t : timesteps) tables.push_back(flow.at(t).mass());
    return tables;
}

inline void write_density_csv(const fs::path& path, const StateSpace& space,
                              const std::vector<double>& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (space.kind() == StateSpace::Kind::grid2d) {
        out << "x,y,density\n";
        for (int s = 0; s < space.size(); ++s) {
            const Cell c = space.cell_at(s);
            out << c.x << ',' << c.y << ',' << detail::fmt(table[static_cast<std::size_t>(s)])
                << "\n";
        }
    } else {
        out << "x,density\n";
        for (int s = 0; s < space.size(); ++s)
            out << s << ',' << detail::fmt(table[static_cast<std::size_t>(s)]) << "\n";
    }
}

// --- ad-hoc teaming -----------------------------------------------------------

struct AdhocResult {
    MeanFieldFlow flow;
    double terminal_entropy = 0.0;
    double terminal_l1_to_uniform = 0.0;
};

/// Mid-episode population injection: propagate under the policy, replace the
/// mean field at join_time with the agent-count-weighted mixture, continue.
template <ActionPolicy P>
AdhocResult adhoc_scenario(const P& policy, const Distribution& mu0, int join_time,
                           const Distribution& join_mu, double base_agents,
                           double joining_agents, const EnvModel& model) {
    if (join_time < 0 || join_time >= model.horizon())
        throw std::invalid_argument("adhoc_scenario: join time outside horizon");
    AdhocResult result;
    result.flow.steps.push_back(mu0);
    for (int n = 0; n < model.horizon(); ++n) {
        if (n == join_time) {
            result.flow.steps.back() = mix_distributions(result.flow.steps.back(), base_agents,
                                                         join_mu, joining_agents);
        }
        result.flow.steps.push_back(
            forward_step(result.flow.steps.back(), policy, model, n));
    }
    result.terminal_entropy = entropy(result.flow.steps.back());
    result.terminal_l1_to_uniform = l1_distance_to_uniform(result.flow.steps.back());
    return result;
}

// --- buffer-size ablation -------------------------------------------------------

struct BufferAblationResult {
    std::vector<int> capacities;  // ascending
    // traces[c][i]: cross-seed mean exploitability at iteration i for capacity c
    std::vector<std::vector<double>> traces;
    fs::path table_path;
};

/// Reruns the experiment once per buffer capacity and emits the overlaid
/// exploitability traces, capacities sorted ascending.
inline BufferAblationResult ablation_buffer_sizes(const ExperimentConfig& config,
                                                  std::vector<int> capacities) {
    if (capacities.empty()) throw std::invalid_argument("ablation: no capacities");
    if (config.algorithm != "m-omd")
        throw std::invalid_argument("ablation: buffer ablation runs the m-omd variant");
    std::sort(capacities.begin(), capacities.end());
    capacities.erase(std::unique(capacities.begin(), capacities.end()), capacities.end());

    BufferAblationResult result;
    result.capacities = capacities;
    for (int cap : capacities) {
        ExperimentConfig cell = config;
        cell.train.buffer_capacity = cap;
        const ExperimentOutcome outcome = run_experiment(cell);
        std::vector<double> mean_trace;
        const std::size_t iterations = outcome.runs.front().mean_exploitability.size();
        for (std::size_t i = 0; i < iterations; ++i) {
            double m = 0.0;
            for (const auto& run : outcome.runs) m += run.mean_exploitability[i];
            mean_trace.push_back(m / static_cast<double>(outcome.runs.size()));
        }
        result.traces.push_back(std::move(mean_trace));
    }

    result.table_path = fs::path(config.outdir) / "buffer_ablation.csv";
    std::ofstream out(result.table_path);
    out << kMetricsSchema << "\n";
    out << "iteration";
    for (int cap : capacities) out << ",cap_" << cap;
    out << "\n";
    for (std::size_t i = 0; i < result.traces.front().size(); ++i) {
        out << (i + 1);
        for (const auto& trace : result.traces) out << ',' << detail::fmt(trace[i]);
        out << "\n";
    }
    return result;
}

// --- tau / alpha sweep ----------------------------------------------------------

struct SweepCell {
    double tau = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    fs::path run_dir;
    double final_mean_exploitability = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    fs::path index_path;
};

/// Grid product over tau and alpha values; one run_experiment per cell, with
/// a consolidated index of final exploitabilities.
inline SweepResult sweep(const ExperimentConfig& config, const std::vector<double>& taus,
                         const std::vector<double>& alphas) {
    if (taus.empty() || alphas.empty()) throw std::invalid_argument("sweep: empty grid");
    SweepResult result;
    for (double tau : taus) {
        for (double alpha : alphas) {
            ExperimentConfig cell = config;
            cell.train.omd_tau = tau;
            cell.train.omd_alpha = alpha;
            const ExperimentOutcome outcome = run_experiment(cell);
            for (const auto& run : outcome.runs) {
                SweepCell entry;
                entry.tau = tau;
                entry.alpha = alpha;
                entry.seed = run.seed;
                entry.run_dir = run.dir;
                entry.final_mean_exploitability = run.mean_exploitability.back();
                result.cells.push_back(std::move(entry));
            }
        }
    }
    result.index_path = fs::path(config.outdir) / "sweep_index.csv";
    std::ofstream out(result.index_path);
    out << kMetricsSchema << "\n";
    out << "omd_tau,omd_alpha,seed,run_dir,final_mean_exploitability\n";
    for (const auto& cell : result.cells)
        out << detail::fmt(cell.tau) << ',' << detail::fmt(cell.alpha) << ',' << cell.seed
            << ',' << cell.run_dir.string() << ',' << detail::fmt(cell.final_mean_exploitability)
            << "\n";
    return result;
}

}  // namespace mfg::harness
