#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfg/distribution.hpp"
#include "mfg/harness/config.hpp"
#include "mfg/rng.hpp"
#include "mfg/state_space.hpp"

namespace mfg::harness {

namespace detail {

inline Distribution gaussian_blob(const StateSpace& space, const Cell& center, double std_dev) {
    std::vector<double> w(static_cast<std::size_t>(space.size()));
    const double inv = 1.0 / (2.0 * std_dev * std_dev);
    for (int s = 0; s < space.size(); ++s) {
        const Cell c = space.cell_at(s);
        const double dx = c.x - center.x;
        const double dy = c.y - center.y;
        w[static_cast<std::size_t>(s)] = std::exp(-(dx * dx + dy * dy) * inv);
    }
    return Distribution::from_unnormalized(std::move(w));
}

inline std::vector<Distribution> read_histogram_file(const std::string& path,
                                                     const StateSpace& space) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("distribution file not found: " + path);
    std::vector<Distribution> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> mass;
        std::istringstream row(line);
        std::string token;
        while (std::getline(row, token, ',')) mass.push_back(std::stod(token));
        if (static_cast<int>(mass.size()) != space.size())
            throw std::invalid_argument("distribution file row has wrong length");
        out.emplace_back(std::move(mass));
    }
    return out;
}

}  // namespace detail

/// Seeded procedural distribution sets: Diracs at random cells, discretized
/// isotropic Gaussian blobs, and uniforms over random cell subsets, in that
/// order; explicit histograms append from a file when given.
inline std::vector<Distribution> generate_distribution_set(const DistributionSetSpec& spec,
                                                           const StateSpace& space) {
    if (spec.dirac_count < 0 || spec.gaussian_count < 0 || spec.random_support_count < 0)
        throw std::invalid_argument("generate_distribution_set: negative count");
    if (spec.gaussian_count > 0 && spec.blob_std <= 0.0)
        throw std::invalid_argument("generate_distribution_set: blob_std must be positive");
    if (spec.random_support_count > 0 &&
        (spec.support_size <= 0 || spec.support_size > space.size()))
        throw std::invalid_argument("generate_distribution_set: bad support size");

    Rng rng(mix_seed(spec.seed, 0x9d15));
    std::vector<Distribution> out;
    out.reserve(static_cast<std::size_t>(spec.total()));

    for (int i = 0; i < spec.dirac_count; ++i)
        out.push_back(Distribution::dirac(space.size(), uniform_int(rng, space.size())));

    for (int i = 0; i < spec.gaussian_count; ++i) {
        const Cell center = space.cell_at(uniform_int(rng, space.size()));
        out.push_back(detail::gaussian_blob(space, center, spec.blob_std));
    }

    for (int i = 0; i < spec.random_support_count; ++i) {
        std::vector<int> cells(static_cast<std::size_t>(space.size()));
        for (int s = 0; s < space.size(); ++s) cells[static_cast<std::size_t>(s)] = s;
        // Fisher-Yates prefix shuffle.
        for (int j = 0; j < spec.support_size; ++j) {
            const int swap = j + uniform_int(rng, space.size() - j);
            std::swap(cells[static_cast<std::size_t>(j)], cells[static_cast<std::size_t>(swap)]);
        }
        std::vector<double> mass(static_cast<std::size_t>(space.size()), 0.0);
        for (int j = 0; j < spec.support_size; ++j)
            mass[static_cast<std::size_t>(cells[static_cast<std::size_t>(j)])] =
                1.0 / spec.support_size;
        out.emplace_back(std::move(mass));
    }

    if (!spec.explicit_file.empty()) {
        auto file = detail::read_histogram_file(spec.explicit_file, space);
        for (auto& d : file) out.push_back(std::move(d));
    }
    if (out.empty()) throw std::invalid_argument("generate_distribution_set: empty set");
    return out;
}

}  // namespace mfg::harness
