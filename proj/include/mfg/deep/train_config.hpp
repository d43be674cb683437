#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfg/encoding.hpp"

namespace mfg::deep {

enum class Variant { momd, vomd1, vomd2, vfp, mfp };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::momd: return "m-omd";
        case Variant::vomd1: return "v-omd1";
        case Variant::vomd2: return "v-omd2";
        case Variant::vfp: return "v-fp";
        case Variant::mfp: return "m-fp";
    }
    return "?";
}

inline Variant parse_variant(const std::string& name) {
    if (name == "m-omd") return Variant::momd;
    if (name == "v-omd1") return Variant::vomd1;
    if (name == "v-omd2") return Variant::vomd2;
    if (name == "v-fp") return Variant::vfp;
    if (name == "m-fp") return Variant::mfp;
    throw std::invalid_argument("unknown algorithm variant: " + name);
}

inline bool population_aware(Variant v) {
    return v == Variant::momd || v == Variant::mfp;
}

inline ObsEncoding encoding_for(Variant v) {
    return population_aware(v) ? ObsEncoding::master : ObsEncoding::vanilla;
}

/// Training hyperparameters; defaults follow the benchmark configuration.
struct TrainConfig {
    Variant variant = Variant::momd;
    std::vector<int> neurons_in_each_layer{64, 64};
    double omd_tau = 50.0;  // 5.0 for v-omd1
    double omd_alpha = 1.0;
    double gamma = 0.99;
    double learning_rate = 1e-4;
    double exploration_fraction = 0.1;
    double exploration_initial = 1.0;
    double exploration_final = 0.05;
    int freq_to_update_target = 4;
    int batch_size = 32;
    int gradient_steps = 1;
    int episodes_per_iteration = 50;
    int max_steps_per_iteration = 30000;
    int iterations = 200;
    int number_of_agents = 500;
    bool sampled_flows = false;
    int buffer_capacity = 30000;
    std::uint64_t seed = 0;

    static TrainConfig defaults_for(Variant v) {
        TrainConfig c;
        c.variant = v;
        if (v == Variant::vomd1) c.omd_tau = 5.0;
        return c;
    }

    void validate() const {
        if (omd_tau <= 0.0) throw std::invalid_argument("config: omd_tau must be > 0");
        if (omd_alpha < 0.0) throw std::invalid_argument("config: omd_alpha must be >= 0");
        if (gamma <= 0.0 || gamma > 1.0)
            throw std::invalid_argument("config: gamma must be in (0, 1]");
        if (learning_rate <= 0.0) throw std::invalid_argument("config: bad learning_rate");
        if (exploration_fraction < 0.0 || exploration_fraction > 1.0)
            throw std::invalid_argument("config: exploration_fraction must be in [0, 1]");
        if (exploration_initial < 0.0 || exploration_initial > 1.0 ||
            exploration_final < 0.0 || exploration_final > 1.0)
            throw std::invalid_argument("config: epsilon bounds must be in [0, 1]");
        if (freq_to_update_target < 1)
            throw std::invalid_argument("config: freq_to_update_target must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
        if (gradient_steps < 1) throw std::invalid_argument("config: gradient_steps must be >= 1");
        if (episodes_per_iteration < 1)
            throw std::invalid_argument("config: episodes_per_iteration must be >= 1");
        if (max_steps_per_iteration < 1)
            throw std::invalid_argument("config: max_steps_per_iteration must be >= 1");
        if (iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
        if (number_of_agents < 1)
            throw std::invalid_argument("config: number_of_agents must be >= 1");
        if (buffer_capacity < batch_size)
            throw std::invalid_argument("config: buffer_capacity must be >= batch_size");
        if (neurons_in_each_layer.empty())
            throw std::invalid_argument("config: need at least one hidden layer");
        for (int n : neurons_in_each_layer)
            if (n < 1) throw std::invalid_argument("config: bad hidden layer width");
    }
};

}  // namespace mfg::deep
