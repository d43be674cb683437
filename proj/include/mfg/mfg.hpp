#pragma once

#include "mfg/distribution.hpp"
#include "mfg/encoding.hpp"
#include "mfg/env_model.hpp"
#include "mfg/flow.hpp"
#include "mfg/math.hpp"
#include "mfg/policy.hpp"
#include "mfg/rng.hpp"
#include "mfg/state_space.hpp"
#include "mfg/tabular.hpp"

#include "mfg/envs/beach_bar.hpp"
#include "mfg/envs/exploration.hpp"
#include "mfg/envs/linear_quadratic.hpp"

#include "mfg/exact/backward_induction.hpp"
#include "mfg/exact/fictitious_play.hpp"
#include "mfg/exact/mirror_descent.hpp"
#include "mfg/exact/munchausen.hpp"
#include "mfg/exact/value.hpp"

#include "mfg/neural/adam.hpp"
#include "mfg/neural/checkpoint.hpp"
#include "mfg/neural/mlp.hpp"
#include "mfg/neural/policy_head.hpp"

#include "mfg/deep/policies.hpp"
#include "mfg/deep/replay_buffer.hpp"
#include "mfg/deep/targets.hpp"
#include "mfg/deep/train_config.hpp"
#include "mfg/deep/trainer.hpp"

#include "mfg/harness/config.hpp"
#include "mfg/harness/distribution_sets.hpp"
#include "mfg/harness/experiment.hpp"
#include "mfg/harness/theorem1_battery.hpp"
