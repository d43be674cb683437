#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfg/distribution.hpp"
#include "mfg/encoding.hpp"
#include "mfg/math.hpp"
#include "mfg/neural/mlp.hpp"
#include "mfg/neural/policy_head.hpp"

namespace mfg::deep {

/// softmax((1/tau) Q_theta(n, x, mu, .)) over a Q-network snapshot.
class SoftmaxQPolicy {
public:
    SoftmaxQPolicy(neural::MlpParams net, double tau, ObsEncoding encoding, int horizon)
        : net_(std::make_shared<const neural::MlpParams>(std::move(net))), tau_(tau),
          encoding_(encoding), horizon_(horizon) {}

    void action_distribution(int n, int x, const Distribution& mu,
                             std::span<double> out) const {
        std::vector<double> obs = encode_observation(encoding_, n, x, mu, horizon_);
        std::vector<double> q = neural::mlp_forward(*net_, obs);
        neural::softmax_policy(q, tau_, out);
    }

    const neural::MlpParams& net() const { return *net_; }

private:
    std::shared_ptr<const neural::MlpParams> net_;
    double tau_;
    ObsEncoding encoding_;
    int horizon_;
};

/// Deterministic argmax policy over a Q-network; ties pick the lowest index.
class GreedyQPolicy {
public:
    GreedyQPolicy(neural::MlpParams net, ObsEncoding encoding, int horizon)
        : net_(std::make_shared<const neural::MlpParams>(std::move(net))),
          encoding_(encoding), horizon_(horizon) {}

    void action_distribution(int n, int x, const Distribution& mu,
                             std::span<double> out) const {
        std::vector<double> obs = encode_observation(encoding_, n, x, mu, horizon_);
        std::vector<double> q = neural::mlp_forward(*net_, obs);
        for (auto& v : out) v = 0.0;
        out[static_cast<std::size_t>(argmax_lowest(q))] = 1.0;
    }

private:
    std::shared_ptr<const neural::MlpParams> net_;
    ObsEncoding encoding_;
    int horizon_;
};

/// Uniform mixture of the stored best-response networks' greedy policies,
/// the evaluation form of the fictitious-play variants.
class FpMixturePolicy {
public:
    FpMixturePolicy(std::vector<neural::MlpParams> nets, ObsEncoding encoding, int horizon)
        : nets_(std::make_shared<const std::vector<neural::MlpParams>>(std::move(nets))),
          encoding_(encoding), horizon_(horizon) {
        if (nets_->empty()) throw std::invalid_argument("FpMixturePolicy: no stored networks");
    }

    void action_distribution(int n, int x, const Distribution& mu,
                             std::span<double> out) const {
        std::vector<double> obs = encode_observation(encoding_, n, x, mu, horizon_);
        std::vector<double> q(out.size());
        for (auto& v : out) v = 0.0;
        for (const auto& net : *nets_) {
            neural::mlp_forward(net, obs, q);
            out[static_cast<std::size_t>(argmax_lowest(q))] += 1.0;
        }
        for (auto& v : out) v /= static_cast<double>(nets_->size());
    }

    std::size_t count() const { return nets_->size(); }

private:
    std::shared_ptr<const std::vector<neural::MlpParams>> nets_;
    ObsEncoding encoding_;
    int horizon_;
};

}  // namespace mfg::deep
