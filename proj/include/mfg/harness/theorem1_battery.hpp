#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mfg/exact/munchausen.hpp"
#include "mfg/harness/config.hpp"
#include "mfg/harness/distribution_sets.hpp"

namespace mfg::harness {

struct Theorem1Report {
    std::string name;
    double tau = 0.0;
    std::uint64_t mu0_seed = 0;
    double deviation = 0.0;
};

/// Seeded battery of small instances (|X| <= 25, N_T <= 10) comparing the
/// tabular Munchausen recursion against explicit Q-summation across the
/// benchmark environments; 7 presets x 3 temperatures = 21 cases.
inline std::vector<Theorem1Report> run_theorem1_battery(int iterations = 10,
                                                        double gamma = 1.0) {
    struct Preset {
        std::string name;
        EnvConfig env;
    };
    std::vector<Preset> presets;
    {
        EnvConfig e;
        e.kind = "exploration";
        e.width = 3;
        e.height = 3;
        e.horizon = 8;
        presets.push_back({"exploration-3x3", e});
        e.width = 4;
        e.height = 4;
        presets.push_back({"exploration-4x4", e});
        e.width = 5;
        e.height = 5;
        e.horizon = 10;
        presets.push_back({"exploration-5x5", e});
    }
    {
        EnvConfig e;
        e.kind = "beach_bar_1d";
        e.length = 11;
        e.horizon = 8;
        e.closing_time = -1;
        presets.push_back({"beach-bar-open", e});
        e.horizon = 10;
        e.closing_time = 6;
        presets.push_back({"beach-bar-closing", e});
    }
    {
        EnvConfig e;
        e.kind = "lq";
        e.half_width = 3;
        e.max_move = 1;
        e.horizon = 8;
        presets.push_back({"lq-7", e});
        e.half_width = 5;
        e.max_move = 2;
        e.horizon = 10;
        presets.push_back({"lq-11", e});
    }

    const double taus[] = {1.0, 5.0, 50.0};
    std::vector<Theorem1Report> reports;
    std::uint64_t case_id = 0;
    for (const auto& preset : presets) {
        const auto env = build_env(preset.env);
        for (double tau : taus) {
            ++case_id;
            DistributionSetSpec dist_spec;
            dist_spec.gaussian_count = 1;
            dist_spec.blob_std = 1.0 + 0.25 * static_cast<double>(case_id % 4);
            dist_spec.seed = 0x7e0 + case_id;
            const Distribution mu0 =
                generate_distribution_set(dist_spec, env->state_space()).front();
            Theorem1Report report;
            report.name = preset.name;
            report.tau = tau;
            report.mu0_seed = dist_spec.seed;
            report.deviation = exact::theorem1_check(*env, mu0, tau, iterations, gamma);
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

}  // namespace mfg::harness
