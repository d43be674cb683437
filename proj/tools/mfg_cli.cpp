// Command-line front end for the mean-field-game solver suite.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfg/mfg.hpp"

namespace fs = std::filesystem;
using namespace mfg;
using harness::ExperimentConfig;

namespace {

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) out.push_back(std::stoi(token));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) out.push_back(std::stod(token));
    return out;
}

// Overrides are appended as config lines, so "section.key=value" reuses the
// normal parser and its validation.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& sets,
                             const std::vector<std::uint64_t>& seeds) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    for (const std::string& kv : sets) {
        const auto dot = kv.find('.');
        const auto eq = kv.find('=');
        if (dot == std::string::npos || eq == std::string::npos || dot > eq)
            throw std::invalid_argument("--set expects section.key=value, got: " + kv);
        text << "\n[" << kv.substr(0, dot) << "]\n"
             << kv.substr(dot + 1, eq - dot - 1) << " = " << kv.substr(eq + 1) << "\n";
    }
    ExperimentConfig config = harness::parse_experiment_config(text.str());
    if (!seeds.empty()) config.seeds = seeds;
    harness::validate_experiment_config(config);
    return config;
}

struct RunContext {
    ExperimentConfig config;
    std::unique_ptr<EnvModel> env;
    std::vector<Distribution> dists;
    AnyPolicy policy;
};

RunContext load_run(const std::string& run_dir, bool test_set, int iteration) {
    RunContext ctx;
    ctx.config = harness::load_experiment_config((fs::path(run_dir) / "config.ini").string());
    ctx.env = harness::build_env(ctx.config.env);
    ctx.dists = harness::generate_distribution_set(
        test_set ? ctx.config.test_dists : ctx.config.train_dists, ctx.env->state_space());
    ctx.policy = harness::load_policy_from_run(run_dir, ctx.config, *ctx.env, iteration);
    return ctx;
}

void write_failure_record(const std::string& message) {
    std::ofstream out("mfg_failure.json");
    out << "{\n  \"error\": \"";
    for (char c : message) {
        if (c == '"' || c == '\\') out << '\\';
        out << (c == '\n' ? ' ' : c);
    }
    out << "\"\n}\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-field-game solvers: population-dependent mirror descent, "
                 "fictitious play, and exact tabular baselines"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::vector<std::uint64_t> seeds;

    auto add_config_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config file")->required();
        cmd->add_option("--set", overrides, "override, section.key=value (repeatable)");
        cmd->add_option("--seed", seeds, "run seed (repeatable, replaces [run] seeds)");
    };

    // train
    auto* train = app.add_subcommand("train", "run the configured algorithm per seed");
    add_config_opts(train);

    // eval-exploitability
    auto* eval = app.add_subcommand("eval-exploitability",
                                    "exact exploitability of a stored policy");
    std::string run_dir;
    bool use_test = false;
    int at_iteration = -1;
    eval->add_option("--run", run_dir, "run directory")->required();
    eval->add_flag("--test", use_test, "evaluate on the test distribution set");
    eval->add_option("--iter", at_iteration, "checkpoint iteration (default: last)");

    // export-density
    auto* density = app.add_subcommand("export-density",
                                       "write per-timestep density tables for a policy");
    std::string density_run, density_out, timestep_list;
    int mu0_index = 0;
    int density_iter = -1;
    density->add_option("--run", density_run, "run directory")->required();
    density->add_option("--out", density_out, "output directory")->required();
    density->add_option("--timesteps", timestep_list, "comma-separated timesteps")->required();
    density->add_option("--mu0-index", mu0_index, "index into the training set");
    density->add_option("--iter", density_iter, "checkpoint iteration (default: last)");
    bool density_test = false;
    density->add_flag("--test", density_test, "draw mu0 from the test set");

    // adhoc
    auto* adhoc = app.add_subcommand("adhoc", "mid-episode team-joining scenario");
    std::string adhoc_run, adhoc_out;
    int join_time = 0, adhoc_mu0 = 0, join_mu0 = 0, adhoc_iter = -1;
    double base_agents = 500.0, joining_agents = 200.0;
    adhoc->add_option("--run", adhoc_run, "run directory")->required();
    adhoc->add_option("--out", adhoc_out, "output directory")->required();
    adhoc->add_option("--join-time", join_time, "timestep at which the group joins")->required();
    adhoc->add_option("--mu0-index", adhoc_mu0, "base initial distribution index");
    adhoc->add_option("--join-mu0-index", join_mu0, "joining distribution index");
    adhoc->add_option("--base-agents", base_agents, "base team size");
    adhoc->add_option("--join-agents", joining_agents, "joining team size");
    adhoc->add_option("--iter", adhoc_iter, "checkpoint iteration (default: last)");

    // ablate-buffer
    auto* ablate = app.add_subcommand("ablate-buffer",
                                      "m-omd runs across replay buffer capacities");
    std::string capacity_list = "200,30000";
    add_config_opts(ablate);
    ablate->add_option("--capacities", capacity_list, "comma-separated capacities");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep over omd_tau / omd_alpha");
    std::string tau_list = "5,50", alpha_list = "1.0";
    add_config_opts(sweep_cmd);
    sweep_cmd->add_option("--tau", tau_list, "comma-separated tau grid");
    sweep_cmd->add_option("--alpha", alpha_list, "comma-separated alpha grid");

    // gen-dists
    auto* gen = app.add_subcommand("gen-dists", "write a generated distribution set");
    std::string gen_out;
    bool gen_test = false;
    add_config_opts(gen);
    gen->add_option("--out", gen_out, "output CSV (one histogram per row)")->required();
    gen->add_flag("--test", gen_test, "use the [test_dists] spec");

    // check-theorem1
    auto* thm = app.add_subcommand(
        "check-theorem1", "regularized-recursion vs explicit-sum equivalence battery");
    int thm_iterations = 10;
    double thm_threshold = 1e-10;
    thm->add_option("--iterations", thm_iterations, "solver iterations per instance");
    thm->add_option("--threshold", thm_threshold, "maximum tolerated policy deviation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            const auto config = load_config(config_path, overrides, seeds);
            const auto outcome = harness::run_experiment(config);
            for (const auto& run : outcome.runs)
                std::cout << "seed " << run.seed << ": " << run.dir.string()
                          << " (final mean exploitability "
                          << run.mean_exploitability.back() << ")\n";
            std::cout << "summary: " << outcome.summary_path.string() << "\n";
        } else if (*eval) {
            const auto ctx = load_run(run_dir, use_test, at_iteration);
            double mean = 0.0;
            for (std::size_t i = 0; i < ctx.dists.size(); ++i) {
                const double e = exact::exploitability(ctx.policy, ctx.dists[i], *ctx.env);
                mean += e;
                std::cout << "mu0_" << i << ": " << e << "\n";
            }
            std::cout << "mean: " << mean / static_cast<double>(ctx.dists.size()) << "\n";
        } else if (*density) {
            const auto ctx = load_run(density_run, density_test, density_iter);
            if (mu0_index < 0 || mu0_index >= static_cast<int>(ctx.dists.size()))
                throw std::invalid_argument("--mu0-index outside the distribution set");
            const auto timesteps = parse_int_list(timestep_list);
            const auto tables = harness::density_tables(
                ctx.policy, ctx.dists[static_cast<std::size_t>(mu0_index)], *ctx.env, timesteps);
            fs::create_directories(density_out);
            for (std::size_t i = 0; i < timesteps.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof(name), "density_n%03d.csv", timesteps[i]);
                harness::write_density_csv(fs::path(density_out) / name,
                                           ctx.env->state_space(), tables[i]);
            }
            std::cout << "wrote " << timesteps.size() << " tables to " << density_out << "\n";
        } else if (*adhoc) {
            const auto ctx = load_run(adhoc_run, false, adhoc_iter);
            if (adhoc_mu0 < 0 || adhoc_mu0 >= static_cast<int>(ctx.dists.size()) ||
                join_mu0 < 0 || join_mu0 >= static_cast<int>(ctx.dists.size()))
                throw std::invalid_argument("distribution index outside the set");
            const auto result = harness::adhoc_scenario(
                ctx.policy, ctx.dists[static_cast<std::size_t>(adhoc_mu0)], join_time,
                ctx.dists[static_cast<std::size_t>(join_mu0)], base_agents, joining_agents,
                *ctx.env);
            fs::create_directories(adhoc_out);
            for (int n = 0; n <= ctx.env->horizon(); ++n) {
                char name[32];
                std::snprintf(name, sizeof(name), "adhoc_n%03d.csv", n);
                harness::write_density_csv(fs::path(adhoc_out) / name,
                                           ctx.env->state_space(),
                                           result.flow.at(n).mass());
            }
            std::cout << "terminal entropy: " << result.terminal_entropy << "\n"
                      << "terminal L1 distance to uniform: "
                      << result.terminal_l1_to_uniform << "\n";
        } else if (*ablate) {
            auto config = load_config(config_path, overrides, seeds);
            const auto result =
                harness::ablation_buffer_sizes(config, parse_int_list(capacity_list));
            std::cout << "capacity table: " << result.table_path.string() << "\n";
            for (std::size_t i = 0; i < result.capacities.size(); ++i)
                std::cout << "capacity " << result.capacities[i]
                          << ": final mean exploitability " << result.traces[i].back() << "\n";
        } else if (*sweep_cmd) {
            auto config = load_config(config_path, overrides, seeds);
            const auto result = harness::sweep(config, parse_double_list(tau_list),
                                               parse_double_list(alpha_list));
            std::cout << "index: " << result.index_path.string() << " ("
                      << result.cells.size() << " rows)\n";
        } else if (*gen) {
            const auto config = load_config(config_path, overrides, seeds);
            const auto env = harness::build_env(config.env);
            const auto dists = harness::generate_distribution_set(
                gen_test ? config.test_dists : config.train_dists, env->state_space());
            std::ofstream out(gen_out);
            if (!out) throw std::invalid_argument("cannot write " + gen_out);
            char buf[40];
            for (const auto& d : dists) {
                for (int i = 0; i < d.size(); ++i) {
                    std::snprintf(buf, sizeof(buf), "%.17g", d[i]);
                    out << (i ? "," : "") << buf;
                }
                out << "\n";
            }
            std::cout << "wrote " << dists.size() << " histograms to " << gen_out << "\n";
        } else if (*thm) {
            const auto reports = harness::run_theorem1_battery(thm_iterations);
            double worst = 0.0;
            for (const auto& r : reports) {
                std::cout << r.name << " tau=" << r.tau << " mu0-seed=" << r.mu0_seed
                          << " deviation=" << r.deviation << "\n";
                worst = std::max(worst, r.deviation);
            }
            std::cout << "instances: " << reports.size() << "\nmax deviation: " << worst
                      << "\n";
            if (worst >= thm_threshold) {
                write_failure_record("theorem-1 deviation above threshold");
                return 2;
            }
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        write_failure_record(e.what());
        return 2;
    }
}
