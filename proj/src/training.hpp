#ifndef HOLTERISK_TRAINING_HPP
#define HOLTERISK_TRAINING_HPP

#include <cstdint>
#include <string>

#include "network.hpp"
#include "optimize.hpp"

namespace holterisk {

class KeyValueConfig;

struct TrainingConfig {
    double weight_decay = 1e-3;
    GdConfig gd;
    BfgsConfig bfgs;
    int n_restarts = 5;
    double init_scale = 0.3;
    bool oversample = true;
    double threshold = 0.5; // class-decision operating point
    std::uint64_t seed = 0;
};

TrainingConfig training_config_from(const KeyValueConfig& kv);

// Minority-class rows replicated so class totals match exactly: each
// gets floor(majority/minority) copies and `majority mod minority`
// seeded distinct rows one extra. Identity on balanced data.
TrainingSet oversample(const TrainingSet& data, std::uint64_t seed);

struct TrainResult {
    Network net;
    double final_cost = 0.0;
    bool aborted = false;
    std::string note;
};

// Momentum gradient descent for the configured epochs, then BFGS; the
// best parameters seen across both phases are returned. The configured
// learning rate applies to the replication-averaged gradient so its
// scale does not depend on the cohort size.
TrainResult train(Network net, const TrainingSet& data, const TrainingConfig& config);

// init + train with seeds derived per restart; smallest final cost wins.
TrainResult train_with_restarts(const NetworkSpec& spec, const TrainingSet& data,
                                const TrainingConfig& config);

} // namespace holterisk

#endif
