#include "adhoc.hpp"

#include <algorithm>
#include <limits>

#include "rng.hpp"

namespace holterisk {

std::vector<SubnetOutcome> pretrain_subnetworks(const TrainingSet& data,
                                                const std::vector<HubColumns>& hubs,
                                                const AdhocGrid& grid, const TrainingConfig& config,
                                                std::uint64_t seed) {
    if (hubs.empty()) throw ConfigError("pretrain_subnetworks: no hub columns");
    std::vector<SubnetOutcome> out;
    for (std::size_t b = 0; b < hubs.size(); ++b) {
        const auto& hub = hubs[b];
        if (hub.cols.empty()) throw ConfigError("pretrain_subnetworks: empty hub " + hub.name);
        const TrainingSet hub_data = data.subset_columns(hub.cols);

        std::vector<CvCandidate> candidates;
        for (int h : grid.hidden_grid)
            for (double l : grid.lambda_grid) candidates.push_back(CvCandidate{h, l});

        const std::uint64_t hub_seed = Rng::derive(seed, hub.name);
        const CvOutcome cv = cross_validate_complexity(hub_data, candidates, grid.cv_folds, config,
                                                       Rng::derive(hub_seed, "cv"));

        TrainingConfig tc = config;
        tc.weight_decay = cv.best.lambda;
        tc.seed = Rng::derive(hub_seed, "pretrain");
        TrainingSet fit = hub_data;
        if (config.oversample) fit = oversample(fit, Rng::derive(hub_seed, "oversample"));
        const NetworkSpec spec =
            conventional_spec(static_cast<int>(hub.cols.size()), cv.best.n_hidden);
        TrainResult tr = train_with_restarts(spec, fit, tc);

        SubnetOutcome so;
        so.hub = hub.name;
        so.cols = hub.cols;
        so.chosen = cv.best;
        so.cv_score = cv.best_score;
        so.net = std::move(tr.net);
        so.train_cost = tr.final_cost;
        out.push_back(std::move(so));
    }
    return out;
}

Network assemble_adhoc(const std::vector<SubnetOutcome>& subnets, double output_init_scale,
                       std::uint64_t seed) {
    std::vector<HubBlock> blocks;
    std::size_t expect = 0;
    for (const auto& s : subnets) {
        for (auto c : s.cols)
            if (c != expect++)
                throw ConfigError("assemble_adhoc: hub columns must be contiguous in hub order");
        blocks.push_back(HubBlock{s.hub, s.net.spec.net});
    }
    Network net;
    net.spec = adhoc_spec(std::move(blocks));
    net.params.reserve(net.spec.n_params());
    for (const auto& s : subnets)
        net.params.insert(net.params.end(), s.net.params.begin(), s.net.params.end());
    Rng rng(Rng::derive(seed, "output-neuron"));
    for (std::size_t i = 0; i < subnets.size() + 1; ++i)
        net.params.push_back(rng.uniform(-output_init_scale, output_init_scale));
    return net;
}

TrainResult assemble_and_finetune(const std::vector<SubnetOutcome>& subnets, const TrainingSet& data,
                                  const TrainingConfig& config, bool select_by_accuracy) {
    TrainResult best;
    best.aborted = true;
    double best_metric = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.n_restarts; ++r) {
        Network init = assemble_adhoc(subnets, config.init_scale,
                                      Rng::derive(config.seed, "finetune", static_cast<std::uint64_t>(r)));
        TrainResult tr = train(std::move(init), data, config);
        if (tr.aborted) continue;
        // Cost already orders restarts; accuracy mode flips the sign so
        // that smaller is better either way.
        const double metric = select_by_accuracy
                                  ? -classification_accuracy(tr.net, data, config.threshold)
                                  : tr.final_cost;
        if (best.aborted || metric < best_metric) {
            best_metric = metric;
            best = std::move(tr);
        }
    }
    if (best.aborted) throw PipelineError("assemble_and_finetune: every restart aborted");
    return best;
}

} // namespace holterisk
