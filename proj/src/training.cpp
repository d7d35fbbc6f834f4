#include "training.hpp"

#include <limits>

#include "config.hpp"
#include "rng.hpp"

namespace holterisk {

TrainingConfig training_config_from(const KeyValueConfig& kv) {
    TrainingConfig tc;
    tc.weight_decay = kv.get_double("weight_decay", tc.weight_decay);
    tc.gd.learning_rate = kv.get_double("learning_rate", tc.gd.learning_rate);
    tc.gd.momentum = kv.get_double("momentum", tc.gd.momentum);
    tc.gd.epochs = static_cast<int>(kv.get_int("gd_epochs", tc.gd.epochs));
    tc.bfgs.max_iterations = static_cast<int>(kv.get_int("bfgs_max_iterations", tc.bfgs.max_iterations));
    tc.bfgs.grad_tol = kv.get_double("bfgs_grad_tol", tc.bfgs.grad_tol);
    tc.bfgs.armijo_c = kv.get_double("armijo_c", tc.bfgs.armijo_c);
    tc.n_restarts = static_cast<int>(kv.get_int("n_restarts", tc.n_restarts));
    tc.init_scale = kv.get_double("init_scale", tc.init_scale);
    tc.oversample = kv.get_bool("oversample", tc.oversample);
    tc.threshold = kv.get_double("threshold", tc.threshold);
    if (tc.weight_decay < 0) throw ConfigError("weight_decay must be >= 0");
    if (tc.gd.learning_rate <= 0) throw ConfigError("learning_rate must be > 0");
    if (tc.gd.momentum < 0 || tc.gd.momentum >= 1) throw ConfigError("momentum must be in [0, 1)");
    if (tc.bfgs.grad_tol <= 0) throw ConfigError("bfgs_grad_tol must be > 0");
    if (tc.n_restarts < 1) throw ConfigError("n_restarts must be >= 1");
    if (tc.threshold <= 0 || tc.threshold >= 1) throw ConfigError("threshold must be in (0, 1)");
    return tc;
}

TrainingSet oversample(const TrainingSet& data, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        if (data.rep[i] != 1)
            throw ConfigError("oversample expects an unreplicated training set");
        (data.y[i] == 1 ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty())
        throw InsufficientDataError("oversample: both classes must be present");

    // The arrhythmic group is the minority in the cohort this models;
    // generalized so balanced or inverted inputs stay well-defined.
    const auto& minority = pos.size() <= neg.size() ? pos : neg;
    const std::size_t target = std::max(pos.size(), neg.size());

    TrainingSet out = data;
    const std::size_t base = target / minority.size();
    const std::size_t extra = target % minority.size();
    for (auto i : minority) out.rep[i] = static_cast<int>(base);
    if (extra > 0) {
        Rng rng(Rng::derive(seed, "oversample"));
        for (auto k : rng.sample_without_replacement(minority.size(), extra))
            out.rep[minority[k]] += 1;
    }
    return out;
}

TrainResult train(Network net, const TrainingSet& data, const TrainingConfig& config) {
    if (static_cast<int>(data.n_features) != net.spec.n_inputs())
        throw ConfigError("train: data width does not match network inputs");

    TrainResult res;
    const double lambda = config.weight_decay;
    Objective sum_obj = [&](const std::vector<double>& x, std::vector<double>& grad) {
        Network probe{net.spec, x};
        return cost_and_gradient(probe, data, lambda, grad);
    };

    // GD sees the same cost scaled by 1/total replication so the
    // learning rate keeps per-sample semantics.
    const double n_eff = static_cast<double>(data.total_replication());
    Objective mean_obj = [&](const std::vector<double>& x, std::vector<double>& grad) {
        const double f = sum_obj(x, grad);
        for (auto& gi : grad) gi /= n_eff;
        return f / n_eff;
    };

    auto gd_res = gradient_descent(mean_obj, net.params, config.gd);
    if (gd_res.aborted) {
        res.net = std::move(net);
        res.aborted = true;
        res.note = "gradient descent: " + gd_res.note;
        res.final_cost = std::numeric_limits<double>::infinity();
        return res;
    }

    auto bfgs_res = bfgs(sum_obj, std::move(gd_res.x), config.bfgs);
    if (bfgs_res.aborted) {
        res.net = std::move(net);
        res.aborted = true;
        res.note = "bfgs: " + bfgs_res.note;
        res.final_cost = std::numeric_limits<double>::infinity();
        return res;
    }

    // bfgs() evaluated its start point (GD's best), so its best-seen
    // covers both phases.
    net.params = std::move(bfgs_res.x);
    res.net = std::move(net);
    res.final_cost = bfgs_res.f;
    res.note = bfgs_res.note;
    return res;
}

TrainResult train_with_restarts(const NetworkSpec& spec, const TrainingSet& data,
                                const TrainingConfig& config) {
    if (config.n_restarts < 1) throw ConfigError("train_with_restarts: n_restarts must be >= 1");
    TrainResult best;
    best.aborted = true;
    best.final_cost = std::numeric_limits<double>::infinity();
    int n_aborted = 0;
    for (int r = 0; r < config.n_restarts; ++r) {
        Network net = init_network(spec, config.init_scale,
                                   Rng::derive(config.seed, "restart", static_cast<std::uint64_t>(r)));
        TrainResult tr = train(std::move(net), data, config);
        if (tr.aborted) {
            ++n_aborted;
            continue;
        }
        if (best.aborted || tr.final_cost < best.final_cost) best = std::move(tr);
    }
    if (best.aborted)
        throw PipelineError("train_with_restarts: all " + std::to_string(config.n_restarts) +
                            " restarts aborted with non-finite cost");
    if (n_aborted > 0)
        best.note += (best.note.empty() ? "" : "; ") + std::to_string(n_aborted) + " restart(s) aborted";
    return best;
}

} // namespace holterisk
