#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfg/neural/mlp.hpp"

namespace mfg::neural {

struct CheckpointMeta {
    std::uint64_t seed = 0;
    int iteration = 0;
    std::string config_hash;  // empty when standalone
};

// Portable numeric text format:
//   mfg-mlp 1
//   dims <d0> <d1> ...
//   seed <u64>
//   iteration <int>
//   confighash <hex-or-dash>
//   <all weights then all biases, layer by layer, %.17g one value per token>
// %.17g round-trips IEEE doubles exactly.
inline void save_mlp(const std::filesystem::path& path, const MlpParams& params,
                     const CheckpointMeta& meta = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_mlp: cannot open " + path.string());
    out << "mfg-mlp 1\n";
    out << "dims";
    for (int d : params.dims) out << ' ' << d;
    out << "\nseed " << meta.seed << "\niteration " << meta.iteration << "\nconfighash "
        << (meta.config_hash.empty() ? "-" : meta.config_hash) << "\n";
    char buf[40];
    auto dump = [&](const std::vector<double>& values) {
        for (double v : values) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << buf << '\n';
        }
    };
    for (const auto& w : params.weights) dump(w);
    for (const auto& b : params.biases) dump(b);
    if (!out) throw std::runtime_error("save_mlp: write failed for " + path.string());
}

inline MlpParams load_mlp(const std::filesystem::path& path, CheckpointMeta* meta = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_mlp: cannot open " + path.string());
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "mfg-mlp" || version != 1)
        throw std::runtime_error("load_mlp: unrecognized format in " + path.string());

    std::string key;
    in >> key;
    if (key != "dims") throw std::runtime_error("load_mlp: missing dims");
    std::string dims_line;
    std::getline(in, dims_line);
    std::istringstream dims_in(dims_line);
    std::vector<int> dims;
    for (int d = 0; dims_in >> d;) dims.push_back(d);

    CheckpointMeta m;
    std::string hash;
    in >> key >> m.seed;
    if (key != "seed") throw std::runtime_error("load_mlp: missing seed");
    in >> key >> m.iteration;
    if (key != "iteration") throw std::runtime_error("load_mlp: missing iteration");
    in >> key >> hash;
    if (key != "confighash") throw std::runtime_error("load_mlp: missing confighash");
    if (hash != "-") m.config_hash = hash;

    MlpParams params = MlpParams::zeros(dims);
    auto slurp = [&](std::vector<double>& values) {
        for (double& v : values)
            if (!(in >> v)) throw std::runtime_error("load_mlp: truncated data");
    };
    for (auto& w : params.weights) slurp(w);
    for (auto& b : params.biases) slurp(b);
    if (meta) *meta = m;
    return params;
}

}  // namespace mfg::neural
