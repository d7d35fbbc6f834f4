#ifndef HOLTERISK_ADHOC_HPP
#define HOLTERISK_ADHOC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "evaluation.hpp"

namespace holterisk {

// Column ranges of one hub inside the assembled training set. Columns
// must be contiguous and in hub order, matching the ad hoc input layout.
struct HubColumns {
    std::string name;
    std::vector<std::size_t> cols;
};

struct AdhocGrid {
    std::vector<int> hidden_grid{0, 1, 2, 3};
    std::vector<double> lambda_grid{1e-4, 1e-3, 1e-2};
    int cv_folds = 10;
};

struct SubnetOutcome {
    std::string hub;
    std::vector<std::size_t> cols;
    CvCandidate chosen;   // hidden count and lambda picked by cross-validation
    double cv_score = 0.0;
    Network net;          // conventional-shaped block trained on the hub columns
    double train_cost = 0.0;
};

// One network per arrhythmogenic factor: per hub, pick the complexity
// by K-fold cross-validation on the hub's columns, then train that
// shape against the shared labels.
std::vector<SubnetOutcome> pretrain_subnetworks(const TrainingSet& data,
                                                const std::vector<HubColumns>& hubs,
                                                const AdhocGrid& grid, const TrainingConfig& config,
                                                std::uint64_t seed);

// Ad hoc network with the pretrained blocks copied in and a small
// freshly seeded output neuron.
Network assemble_adhoc(const std::vector<SubnetOutcome>& subnets, double output_init_scale,
                       std::uint64_t seed);

// Joint fine-tune of the assembled network. Restarts redraw only the
// output neuron; the subnet blocks always start from their pretrained
// values. Restart selection is by training cost, or by training
// accuracy when select_by_accuracy is set.
TrainResult assemble_and_finetune(const std::vector<SubnetOutcome>& subnets, const TrainingSet& data,
                                  const TrainingConfig& config, bool select_by_accuracy);

} // namespace holterisk

#endif
