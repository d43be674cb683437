#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfg/deep/train_config.hpp"
#include "mfg/env_model.hpp"
#include "mfg/envs/beach_bar.hpp"
#include "mfg/envs/exploration.hpp"
#include "mfg/envs/linear_quadratic.hpp"

namespace mfg::harness {

struct EnvConfig {
    std::string kind = "exploration";  // exploration | exploration_four_rooms |
                                       // beach_bar_1d | beach_bar_2d | lq
    int width = 11;
    int height = 11;
    int length = 11;        // 1D beach
    int horizon = 30;
    int closing_time = -1;  // < 0 disables bar closing
    int half_width = 20;
    int max_move = 3;
    double sigma = 1.0;
    double dt = 1.0;
    double q = 0.01;
    double kappa = 0.5;
    double c_term = 1.0;
};

inline std::unique_ptr<EnvModel> build_env(const EnvConfig& c) {
    using namespace mfg::envs;
    if (c.kind == "exploration") {
        ExplorationSpec spec;
        spec.width = c.width;
        spec.height = c.height;
        spec.horizon = c.horizon;
        return std::make_unique<ExplorationEnv>(spec);
    }
    if (c.kind == "exploration_four_rooms") {
        ExplorationSpec spec;
        spec.width = c.width;
        spec.height = c.height;
        spec.horizon = c.horizon;
        spec.walls = build_four_rooms(c.width, c.height);
        return std::make_unique<ExplorationEnv>(spec);
    }
    if (c.kind == "beach_bar_1d") {
        std::optional<int> closing;
        if (c.closing_time >= 0) closing = c.closing_time;
        return std::make_unique<BeachBarEnv>(BeachBarSpec::line(c.length, closing, c.horizon));
    }
    if (c.kind == "beach_bar_2d") {
        BeachBarSpec spec;
        spec.width = c.width;
        spec.height = c.height;
        spec.horizon = c.horizon;
        if (c.closing_time >= 0) spec.closing_time = c.closing_time;
        return std::make_unique<BeachBarEnv>(spec);
    }
    if (c.kind == "lq") {
        LQSpec spec;
        spec.half_width = c.half_width;
        spec.max_move = c.max_move;
        spec.sigma = c.sigma;
        spec.dt = c.dt;
        spec.q = c.q;
        spec.kappa = c.kappa;
        spec.c_term = c.c_term;
        spec.horizon = c.horizon;
        return std::make_unique<LinearQuadraticEnv>(spec);
    }
    throw std::invalid_argument("unknown environment kind: " + c.kind);
}

struct DistributionSetSpec {
    int dirac_count = 0;
    int gaussian_count = 0;
    int random_support_count = 0;
    double blob_std = 1.5;
    int support_size = 5;
    std::uint64_t seed = 1;
    std::string explicit_file;

    int total() const { return dirac_count + gaussian_count + random_support_count; }
};

struct ExperimentConfig {
    EnvConfig env;
    std::string algorithm = "m-omd";  // deep variants plus tabular-fp / tabular-omd
    deep::TrainConfig train;
    DistributionSetSpec train_dists{.gaussian_count = 3, .seed = 7};
    DistributionSetSpec test_dists{.gaussian_count = 3, .seed = 1007};
    std::vector<std::uint64_t> seeds{1};
    std::string outdir = "runs";
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct KeyValue {
    std::string section;
    std::string key;
    std::string value;
};

inline std::vector<KeyValue> parse_ini(const std::string& text) {
    std::vector<KeyValue> out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        KeyValue kv;
        kv.section = section;
        kv.key = trim(line.substr(0, eq));
        kv.value = trim(line.substr(eq + 1));
        if (kv.section.empty() || kv.key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside a section");
        out.push_back(std::move(kv));
    }
    return out;
}

inline int to_int(const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad integer for " + kv.section + "." + kv.key);
    }
}

inline double to_double(const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad number for " + kv.section + "." + kv.key);
    }
}

inline bool to_bool(const KeyValue& kv) {
    if (kv.value == "true" || kv.value == "1") return true;
    if (kv.value == "false" || kv.value == "0") return false;
    throw std::invalid_argument("config: bad boolean for " + kv.section + "." + kv.key);
}

inline std::uint64_t to_u64(const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad seed for " + kv.section + "." + kv.key);
    }
}

inline std::vector<std::uint64_t> to_u64_list(const KeyValue& kv) {
    std::vector<std::uint64_t> out;
    std::string token;
    std::istringstream in(kv.value);
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        out.push_back(to_u64({kv.section, kv.key, token}));
    }
    if (out.empty())
        throw std::invalid_argument("config: empty list for " + kv.section + "." + kv.key);
    return out;
}

// "64*64" -> {64, 64}
inline std::vector<int> to_layer_list(const KeyValue& kv) {
    std::vector<int> out;
    std::string token;
    std::istringstream in(kv.value);
    while (std::getline(in, token, '*')) {
        token = trim(token);
        out.push_back(to_int({kv.section, kv.key, token}));
    }
    if (out.empty())
        throw std::invalid_argument("config: empty layer list for " + kv.section + "." + kv.key);
    return out;
}

inline std::string layer_list_string(const std::vector<int>& layers) {
    std::string s;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (i) s += '*';
        s += std::to_string(layers[i]);
    }
    return s;
}

inline void apply_dist_key(DistributionSetSpec& d, const KeyValue& kv) {
    if (kv.key == "dirac_count") d.dirac_count = to_int(kv);
    else if (kv.key == "gaussian_count") d.gaussian_count = to_int(kv);
    else if (kv.key == "random_support_count") d.random_support_count = to_int(kv);
    else if (kv.key == "blob_std") d.blob_std = to_double(kv);
    else if (kv.key == "support_size") d.support_size = to_int(kv);
    else if (kv.key == "seed") d.seed = to_u64(kv);
    else if (kv.key == "explicit_file") d.explicit_file = kv.value;
    else throw std::invalid_argument("config: unknown key " + kv.section + "." + kv.key);
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig c;
    for (const auto& kv : detail::parse_ini(text)) {
        if (kv.section == "env") {
            if (kv.key == "kind") c.env.kind = kv.value;
            else if (kv.key == "width") c.env.width = detail::to_int(kv);
            else if (kv.key == "height") c.env.height = detail::to_int(kv);
            else if (kv.key == "length") c.env.length = detail::to_int(kv);
            else if (kv.key == "horizon") c.env.horizon = detail::to_int(kv);
            else if (kv.key == "closing_time") c.env.closing_time = detail::to_int(kv);
            else if (kv.key == "half_width") c.env.half_width = detail::to_int(kv);
            else if (kv.key == "max_move") c.env.max_move = detail::to_int(kv);
            else if (kv.key == "sigma") c.env.sigma = detail::to_double(kv);
            else if (kv.key == "dt") c.env.dt = detail::to_double(kv);
            else if (kv.key == "q") c.env.q = detail::to_double(kv);
            else if (kv.key == "kappa") c.env.kappa = detail::to_double(kv);
            else if (kv.key == "c_term") c.env.c_term = detail::to_double(kv);
            else throw std::invalid_argument("config: unknown key env." + kv.key);
        } else if (kv.section == "algo") {
            if (kv.key == "variant") c.algorithm = kv.value;
            else throw std::invalid_argument("config: unknown key algo." + kv.key);
        } else if (kv.section == "train") {
            auto& t = c.train;
            if (kv.key == "neurons_in_each_layer")
                t.neurons_in_each_layer = detail::to_layer_list(kv);
            else if (kv.key == "omd_tau") t.omd_tau = detail::to_double(kv);
            else if (kv.key == "omd_alpha") t.omd_alpha = detail::to_double(kv);
            else if (kv.key == "gamma") t.gamma = detail::to_double(kv);
            else if (kv.key == "learning_rate") t.learning_rate = detail::to_double(kv);
            else if (kv.key == "exploration_fraction")
                t.exploration_fraction = detail::to_double(kv);
            else if (kv.key == "exploration_initial")
                t.exploration_initial = detail::to_double(kv);
            else if (kv.key == "exploration_final")
                t.exploration_final = detail::to_double(kv);
            else if (kv.key == "freq_to_update_target")
                t.freq_to_update_target = detail::to_int(kv);
            else if (kv.key == "batch_size") t.batch_size = detail::to_int(kv);
            else if (kv.key == "gradient_steps") t.gradient_steps = detail::to_int(kv);
            else if (kv.key == "episodes_per_iteration")
                t.episodes_per_iteration = detail::to_int(kv);
            else if (kv.key == "max_steps_per_iteration")
                t.max_steps_per_iteration = detail::to_int(kv);
            else if (kv.key == "iterations") t.iterations = detail::to_int(kv);
            else if (kv.key == "number_of_agents") t.number_of_agents = detail::to_int(kv);
            else if (kv.key == "sampled_flows") t.sampled_flows = detail::to_bool(kv);
            else if (kv.key == "buffer_capacity") t.buffer_capacity = detail::to_int(kv);
            else throw std::invalid_argument("config: unknown key train." + kv.key);
        } else if (kv.section == "dists") {
            detail::apply_dist_key(c.train_dists, kv);
        } else if (kv.section == "test_dists") {
            detail::apply_dist_key(c.test_dists, kv);
        } else if (kv.section == "run") {
            if (kv.key == "seeds") c.seeds = detail::to_u64_list(kv);
            else if (kv.key == "outdir") c.outdir = kv.value;
            else throw std::invalid_argument("config: unknown key run." + kv.key);
        } else {
            throw std::invalid_argument("config: unknown section [" + kv.section + "]");
        }
    }
    return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_experiment_config(text.str());
}

namespace detail {

inline void serialize_dists(std::ostringstream& out, const char* section,
                            const DistributionSetSpec& d) {
    out << "[" << section << "]\n";
    out << "dirac_count = " << d.dirac_count << "\n";
    out << "gaussian_count = " << d.gaussian_count << "\n";
    out << "random_support_count = " << d.random_support_count << "\n";
    out << "blob_std = " << format_double(d.blob_std) << "\n";
    out << "support_size = " << d.support_size << "\n";
    out << "seed = " << d.seed << "\n";
    out << "explicit_file = " << d.explicit_file << "\n";
}

}  // namespace detail

/// Canonical text form; parse(serialize(c)) reproduces c exactly.
inline std::string serialize_experiment_config(const ExperimentConfig& c,
                                               bool include_run_section = true) {
    std::ostringstream out;
    out << "[env]\n";
    out << "kind = " << c.env.kind << "\n";
    out << "width = " << c.env.width << "\n";
    out << "height = " << c.env.height << "\n";
    out << "length = " << c.env.length << "\n";
    out << "horizon = " << c.env.horizon << "\n";
    out << "closing_time = " << c.env.closing_time << "\n";
    out << "half_width = " << c.env.half_width << "\n";
    out << "max_move = " << c.env.max_move << "\n";
    out << "sigma = " << detail::format_double(c.env.sigma) << "\n";
    out << "dt = " << detail::format_double(c.env.dt) << "\n";
    out << "q = " << detail::format_double(c.env.q) << "\n";
    out << "kappa = " << detail::format_double(c.env.kappa) << "\n";
    out << "c_term = " << detail::format_double(c.env.c_term) << "\n";
    out << "\n[algo]\nvariant = " << c.algorithm << "\n";
    out << "\n[train]\n";
    out << "neurons_in_each_layer = "
        << detail::layer_list_string(c.train.neurons_in_each_layer) << "\n";
    out << "omd_tau = " << detail::format_double(c.train.omd_tau) << "\n";
    out << "omd_alpha = " << detail::format_double(c.train.omd_alpha) << "\n";
    out << "gamma = " << detail::format_double(c.train.gamma) << "\n";
    out << "learning_rate = " << detail::format_double(c.train.learning_rate) << "\n";
    out << "exploration_fraction = " << detail::format_double(c.train.exploration_fraction)
        << "\n";
    out << "exploration_initial = " << detail::format_double(c.train.exploration_initial)
        << "\n";
    out << "exploration_final = " << detail::format_double(c.train.exploration_final) << "\n";
    out << "freq_to_update_target = " << c.train.freq_to_update_target << "\n";
    out << "batch_size = " << c.train.batch_size << "\n";
    out << "gradient_steps = " << c.train.gradient_steps << "\n";
    out << "episodes_per_iteration = " << c.train.episodes_per_iteration << "\n";
    out << "max_steps_per_iteration = " << c.train.max_steps_per_iteration << "\n";
    out << "iterations = " << c.train.iterations << "\n";
    out << "number_of_agents = " << c.train.number_of_agents << "\n";
    out << "sampled_flows = " << (c.train.sampled_flows ? "true" : "false") << "\n";
    out << "buffer_capacity = " << c.train.buffer_capacity << "\n\n";
    detail::serialize_dists(out, "dists", c.train_dists);
    out << "\n";
    detail::serialize_dists(out, "test_dists", c.test_dists);
    if (include_run_section) {
        out << "\n[run]\nseeds = ";
        for (std::size_t i = 0; i < c.seeds.size(); ++i) {
            if (i) out << ",";
            out << c.seeds[i];
        }
        out << "\noutdir = " << c.outdir << "\n";
    }
    return out.str();
}

inline std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

/// Content hash of everything except the [run] section; together with the
/// seed it names a run directory.
inline std::string config_hash(const ExperimentConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(serialize_experiment_config(c, false))));
    return buf;
}

inline bool is_tabular_algorithm(const std::string& algorithm) {
    return algorithm == "tabular-fp" || algorithm == "tabular-omd";
}

inline void validate_experiment_config(const ExperimentConfig& c) {
    build_env(c.env);  // throws on bad environment parameters
    if (!is_tabular_algorithm(c.algorithm)) deep::parse_variant(c.algorithm);
    c.train.validate();
    if (c.train_dists.total() <= 0 && c.train_dists.explicit_file.empty())
        throw std::invalid_argument("config: empty training distribution set");
    if (c.seeds.empty()) throw std::invalid_argument("config: no seeds");
    if (is_tabular_algorithm(c.algorithm) && c.train_dists.total() > 1)
        throw std::invalid_argument(
            "config: tabular solvers run on a single initial distribution");
}

}  // namespace mfg::harness
