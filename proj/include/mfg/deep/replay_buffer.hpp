#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/rng.hpp"

namespace mfg::deep {

/// One experience tuple ((n, x, mu_n), a, r, (n+1, x', mu_{n+1})); the
/// observations are already encoded for the variant in use.
struct Transition {
    std::vector<double> obs;
    std::vector<double> next_obs;
    int action = 0;
    double reward = 0.0;
    bool terminal = false;  // n + 1 == N_T
};

/// Bounded FIFO store with uniform with-replacement sampling. Cleared once
/// per outer training iteration, before data collection.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw std::invalid_argument("ReplayBuffer: zero capacity");
        storage_.reserve(capacity);
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return size_; }

    void push(Transition t) {
        if (size_ < capacity_) {
            if (storage_.size() < capacity_ && next_ == storage_.size())
                storage_.push_back(std::move(t));
            else
                storage_[next_] = std::move(t);
            ++size_;
        } else {
            storage_[next_] = std::move(t);  // evict oldest
        }
        next_ = (next_ + 1) % capacity_;
    }

    // Logical reset; retained storage is overwritten by later pushes.
    void clear() {
        size_ = 0;
        next_ = 0;
    }

    const Transition& at(std::size_t i) const { return storage_[i]; }

    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const {
        if (batch == 0) throw std::invalid_argument("ReplayBuffer: empty batch");
        if (size_ < batch)
            throw std::invalid_argument("ReplayBuffer: not enough transitions to sample");
        std::vector<const Transition*> out(batch);
        for (auto& slot : out)
            slot = &storage_[static_cast<std::size_t>(
                uniform_int(rng, static_cast<int>(size_)))];
        return out;
    }

private:
    std::size_t capacity_ = 0;
    std::size_t size_ = 0;
    std::size_t next_ = 0;
    std::vector<Transition> storage_;
};

}  // namespace mfg::deep
