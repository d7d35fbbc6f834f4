#include "pipeline.hpp"

#include <algorithm>

#include "cohort.hpp"
#include "config.hpp"
#include "csvutil.hpp"
#include "rng.hpp"

namespace holterisk {

ExperimentConfig experiment_config_from(const KeyValueConfig& kv) {
    ExperimentConfig cfg;
    cfg.selection = selection_config_from(kv);
    cfg.training = training_config_from(kv);
    cfg.protocol.cv_folds = static_cast<int>(kv.get_int("cv_folds", cfg.protocol.cv_folds));
    cfg.protocol.cross_test_folds =
        static_cast<int>(kv.get_int("cross_test_folds", cfg.protocol.cross_test_folds));
    cfg.protocol.hidden_grid = kv.get_int_list("hidden_grid", cfg.protocol.hidden_grid);
    cfg.protocol.lambda_grid = kv.get_double_list("lambda_grid", cfg.protocol.lambda_grid);
    cfg.protocol.reuse_global_selection =
        kv.get_bool("reuse_global_selection", cfg.protocol.reuse_global_selection);
    const std::string metric = kv.get_string("adhoc_restart_metric", "cost");
    if (metric == "cost")
        cfg.protocol.adhoc_restart_by_accuracy = false;
    else if (metric == "accuracy")
        cfg.protocol.adhoc_restart_by_accuracy = true;
    else
        throw ConfigError("adhoc_restart_metric must be `cost` or `accuracy`");
    if (cfg.protocol.cv_folds < 2 || cfg.protocol.cross_test_folds < 2)
        throw ConfigError("cv_folds and cross_test_folds must be >= 2");
    for (int h : cfg.protocol.hidden_grid)
        if (h < 0) throw ConfigError("hidden_grid entries must be >= 0");
    for (double l : cfg.protocol.lambda_grid)
        if (l < 0) throw ConfigError("lambda_grid entries must be >= 0");
    cfg.seed = kv.require_seed();
    cfg.selection.seed = cfg.seed;
    cfg.training.seed = cfg.seed;
    return cfg;
}

namespace {

// Hub-ordered selection lists for one fold; global lists are reused
// verbatim when present.
std::vector<std::pair<std::string, std::vector<std::string>>> fold_selection(
    const FeatureMatrix& train, const ExperimentConfig& cfg,
    const std::optional<SelectionResult>& global_selection, std::uint64_t fold_seed,
    std::vector<std::string>& warnings) {
    const SelectionResult* sel = nullptr;
    SelectionResult local;
    if (global_selection) {
        sel = &*global_selection;
    } else {
        SelectionConfig sc = cfg.selection;
        sc.seed = Rng::derive(fold_seed, "selection");
        local = select_per_hub(train, sc);
        sel = &local;
        for (const auto& w : local.warnings) warnings.push_back(w);
    }
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (const auto& hs : sel->hubs) {
        const std::string name = sel->per_hub_mode ? hub_name(hs.hub) : "GLOBAL";
        out.emplace_back(name, hs.selected);
    }
    return out;
}

Scorer constant_scorer(double p) {
    return Scorer{[p](std::span<const double>) { return p; }};
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

ModelFactory make_model_factory(Architecture arch, const ExperimentConfig& cfg,
                                const std::optional<SelectionResult>& global_selection,
                                std::vector<FoldModelInfo>& info_sink) {
    return [arch, &cfg, &global_selection, &info_sink](const FeatureMatrix& train, int fold,
                                                       std::uint64_t fold_seed) -> Scorer {
        FoldModelInfo info;
        info.fold = fold;
        info.selected_per_hub = fold_selection(train, cfg, global_selection, fold_seed, info.warnings);
        for (const auto& [hub, feats] : info.selected_per_hub)
            for (const auto& f : feats) info.selected_union.push_back(f);

        if (info.selected_union.empty()) {
            // Nothing survived selection; fall back to the base rate.
            info.warnings.push_back("no feature selected; constant base-rate classifier used");
            double pos = 0.0;
            for (int l : train.labels) pos += (l == 1);
            const double rate = pos / static_cast<double>(train.labels.size());
            info_sink.push_back(std::move(info));
            return constant_scorer(rate);
        }

        // Restrict to the selected columns and standardize on this
        // fold's training rows only.
        FeatureMatrix sub;
        sub.feature_names = info.selected_union;
        sub.patient_ids = train.patient_ids;
        sub.labels = train.labels;
        sub.values.reserve(train.rows() * sub.feature_names.size());
        std::vector<std::size_t> src_cols;
        for (const auto& f : sub.feature_names) src_cols.push_back(*train.col_index(f));
        for (std::size_t r = 0; r < train.rows(); ++r)
            for (auto c : src_cols) {
                sub.values.push_back(train.at(r, c));
                sub.missing.push_back(0);
            }
        const ScalingParams scaling = fit_scaling(sub);
        const FeatureMatrix sub_std = apply_scaling(sub, scaling);
        const TrainingSet full = TrainingSet::from_matrix(sub_std, sub_std.feature_names);

        TrainingSet fit = full;
        if (cfg.training.oversample) fit = oversample(fit, Rng::derive(fold_seed, "oversample"));

        std::vector<CvCandidate> candidates;
        for (int h : cfg.protocol.hidden_grid)
            for (double l : cfg.protocol.lambda_grid) candidates.push_back(CvCandidate{h, l});

        Network trained;
        if (arch == Architecture::Conventional) {
            const CvOutcome cv = cross_validate_complexity(full, candidates, cfg.protocol.cv_folds,
                                                           cfg.training, Rng::derive(fold_seed, "cv"));
            info.complexity.push_back(
                ChosenComplexity{"conventional", cv.best.n_hidden, cv.best.lambda, cv.best_score});
            TrainingConfig tc = cfg.training;
            tc.weight_decay = cv.best.lambda;
            tc.seed = Rng::derive(fold_seed, "final");
            const NetworkSpec spec =
                conventional_spec(static_cast<int>(full.n_features), cv.best.n_hidden);
            trained = train_with_restarts(spec, fit, tc).net;
        } else {
            std::vector<HubColumns> hub_cols;
            std::size_t off = 0;
            for (const auto& [hub, feats] : info.selected_per_hub) {
                if (feats.empty()) continue;
                HubColumns hc;
                hc.name = hub;
                for (std::size_t i = 0; i < feats.size(); ++i) hc.cols.push_back(off + i);
                off += feats.size();
                hub_cols.push_back(std::move(hc));
            }

            AdhocGrid grid;
            grid.hidden_grid = cfg.protocol.hidden_grid;
            grid.lambda_grid = cfg.protocol.lambda_grid;
            grid.cv_folds = cfg.protocol.cv_folds;
            TrainingConfig tc = cfg.training;
            tc.seed = Rng::derive(fold_seed, "adhoc");
            const auto subnets = pretrain_subnetworks(full, hub_cols, grid, tc, tc.seed);

            std::vector<double> lambdas;
            for (const auto& s : subnets) {
                info.complexity.push_back(
                    ChosenComplexity{s.hub, s.chosen.n_hidden, s.chosen.lambda, s.cv_score});
                lambdas.push_back(s.chosen.lambda);
            }
            // The joint fine-tune keeps the median of the per-hub
            // decay strengths (the paper selects complexity per
            // subnetwork only).
            TrainingConfig ft = cfg.training;
            ft.weight_decay = median_of(lambdas);
            ft.seed = Rng::derive(fold_seed, "finetune");
            trained = assemble_and_finetune(subnets, fit, ft,
                                            cfg.protocol.adhoc_restart_by_accuracy)
                          .net;
        }

        info_sink.push_back(std::move(info));

        // Bind everything the scorer needs by value; raw rows arrive in
        // the evaluation matrix's column order.
        std::vector<std::size_t> eval_cols = src_cols;
        std::vector<double> mean = scaling.mean, sd = scaling.sd;
        Network net = std::move(trained);
        return Scorer{[eval_cols, mean, sd, net](std::span<const double> raw) {
            std::vector<double> x(eval_cols.size());
            for (std::size_t i = 0; i < eval_cols.size(); ++i)
                x[i] = (raw[eval_cols[i]] - mean[i]) / sd[i];
            return forward(net, x);
        }};
    };
}

namespace {

ArchitectureResult run_architecture(Architecture arch, const std::string& name,
                                    const FeatureMatrix& matrix, const ExperimentConfig& cfg,
                                    const std::optional<SelectionResult>& global_selection) {
    ArchitectureResult res;
    res.name = name;
    ModelFactory factory = make_model_factory(arch, cfg, global_selection, res.fold_info);
    res.ct = cross_test(matrix, cfg.protocol.cross_test_folds, true, cfg.seed,
                        cfg.training.threshold, factory);
    return res;
}

} // namespace

EvaluationReport run_full_protocol(const FeatureMatrix& complete, const ExperimentConfig& cfg) {
    if (!complete.complete())
        throw InsufficientDataError("run_full_protocol requires a complete matrix");
    if (cfg.selection.per_hub && complete.hub_of.size() < complete.cols())
        throw ConfigError("run_full_protocol: hubs not assigned");

    EvaluationReport rep;
    rep.seed = cfg.seed;
    rep.reused_global_selection = cfg.protocol.reuse_global_selection;

    std::optional<SelectionResult> global;
    if (cfg.protocol.reuse_global_selection) {
        SelectionConfig sc = cfg.selection;
        sc.seed = Rng::derive(cfg.seed, "global-selection");
        global = select_per_hub(complete, sc);
        rep.global_selection = global;
        for (const auto& w : global->warnings) rep.warnings.push_back(w);
    }

    rep.conventional = run_architecture(Architecture::Conventional, "conventional", complete, cfg, global);
    rep.adhoc = run_architecture(Architecture::AdHoc, "adhoc", complete, cfg, global);

    // Shared seed means shared folds; the comparison is paired by fold.
    if (rep.conventional.ct.plan.assignment != rep.adhoc.ct.plan.assignment)
        throw PipelineError("run_full_protocol: fold plans diverged between architectures");

    std::vector<long> conv_correct, adhoc_correct;
    for (const auto& fe : rep.conventional.ct.folds) conv_correct.push_back(fe.m.correctly_classified);
    for (const auto& fe : rep.adhoc.ct.folds) adhoc_correct.push_back(fe.m.correctly_classified);
    rep.p_value = compare_classifiers(conv_correct, adhoc_correct);

    for (const auto& w : rep.conventional.ct.warnings) rep.warnings.push_back("conventional: " + w);
    for (const auto& w : rep.adhoc.ct.warnings) rep.warnings.push_back("adhoc: " + w);

    rep.config_echo["seed"] = std::to_string(cfg.seed);
    rep.config_echo["cv_folds"] = std::to_string(cfg.protocol.cv_folds);
    rep.config_echo["cross_test_folds"] = std::to_string(cfg.protocol.cross_test_folds);
    rep.config_echo["rho_max"] = format_double(cfg.selection.rho_max);
    rep.config_echo["probe_realizations"] = std::to_string(cfg.selection.n_probe_realizations);
    rep.config_echo["selection_mode"] =
        cfg.protocol.reuse_global_selection ? "global (fixed across folds)" : "re-run per training fold";
    {
        std::string hg;
        for (int h : cfg.protocol.hidden_grid) hg += (hg.empty() ? "" : ",") + std::to_string(h);
        rep.config_echo["hidden_grid"] = hg;
        std::string lg;
        for (double l : cfg.protocol.lambda_grid) lg += (lg.empty() ? "" : ",") + format_double(l);
        rep.config_echo["lambda_grid"] = lg;
    }
    rep.config_echo["oversample"] = cfg.training.oversample ? "true" : "false";
    rep.config_echo["threshold"] = format_double(cfg.training.threshold);
    rep.config_echo["n_restarts"] = std::to_string(cfg.training.n_restarts);
    return rep;
}

} // namespace holterisk
