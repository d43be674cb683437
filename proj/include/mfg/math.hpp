#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace mfg {

// Numerically stable softmax: subtracts the max logit before exponentiation.
inline void softmax(std::span<const double> logits, std::span<double> out) {
    if (logits.empty() || logits.size() != out.size())
        throw std::invalid_argument("softmax: bad shapes");
    double hi = logits[0];
    for (double v : logits) hi = std::max(hi, v);
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - hi);
        total += out[i];
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= total;
}

inline int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

}  // namespace mfg
