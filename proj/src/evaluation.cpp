#include "evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rng.hpp"

namespace holterisk {

std::vector<std::size_t> FoldPlan::fold_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] != fold) out.push_back(i);
    return out;
}

FoldPlan make_folds(const std::vector<int>& labels, int k, bool stratified, std::uint64_t seed) {
    if (k < 2) throw ConfigError("make_folds: need K >= 2");
    if (labels.size() < static_cast<std::size_t>(k))
        throw InsufficientDataError("make_folds: fewer rows than folds");

    FoldPlan plan;
    plan.k = k;
    plan.stratified = stratified;
    plan.seed = seed;
    plan.assignment.assign(labels.size(), -1);

    Rng rng(Rng::derive(seed, "folds"));
    if (stratified) {
        for (int cls : {0, 1}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] == cls) idx.push_back(i);
            if (idx.size() < static_cast<std::size_t>(k))
                throw InsufficientDataError("make_folds: class " + std::to_string(cls) + " has " +
                                            std::to_string(idx.size()) + " rows, fewer than K=" +
                                            std::to_string(k));
            rng.shuffle(idx);
            for (std::size_t i = 0; i < idx.size(); ++i)
                plan.assignment[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
        }
    } else {
        std::vector<std::size_t> idx(labels.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        rng.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i)
            plan.assignment[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return plan;
}

Metrics metrics(const ConfusionMatrix& cm) {
    if (cm.total() <= 0) throw ConfigError("metrics: empty confusion matrix");
    if (cm.tn < 0 || cm.fp < 0 || cm.fn < 0 || cm.tp < 0)
        throw ConfigError("metrics: negative count");
    Metrics m;
    m.total = cm.total();
    m.correctly_classified = cm.tn + cm.tp;
    if (cm.tn + cm.fn > 0) m.npv = 100.0 * static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fn);
    if (cm.tp + cm.fp > 0) m.ppv = 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    m.implant_reduction = 100.0 * static_cast<double>(cm.tn + cm.fn) / static_cast<double>(m.total);
    return m;
}

ConfusionMatrix aggregate(std::span<const ConfusionMatrix> matrices) {
    if (matrices.empty()) throw ConfigError("aggregate: empty list");
    ConfusionMatrix sum;
    for (const auto& m : matrices) sum += m;
    return sum;
}

double compare_classifiers(const std::vector<long>& correct_a, const std::vector<long>& correct_b) {
    if (correct_a.size() != correct_b.size())
        throw ConfigError("compare_classifiers: fold counts differ");
    const std::size_t k = correct_a.size();
    if (k < 2) throw ConfigError("compare_classifiers: need at least 2 folds");
    if (k > 24) throw ConfigError("compare_classifiers: exact enumeration capped at 24 folds");

    std::vector<long> d(k);
    long observed = 0;
    for (std::size_t i = 0; i < k; ++i) {
        d[i] = correct_b[i] - correct_a[i];
        observed += d[i];
    }

    // Exact sign-flip null: all 2^k signed sums, p = P(sum >= observed).
    const std::uint64_t n_assign = 1ULL << k;
    std::uint64_t at_least = 0;
    for (std::uint64_t mask = 0; mask < n_assign; ++mask) {
        long sum = 0;
        for (std::size_t i = 0; i < k; ++i) sum += (mask >> i) & 1ULL ? d[i] : -d[i];
        if (sum >= observed) ++at_least;
    }
    return static_cast<double>(at_least) / static_cast<double>(n_assign);
}

CvOutcome cross_validate_complexity(const TrainingSet& data, const std::vector<CvCandidate>& candidates,
                                    int k, const TrainingConfig& config, std::uint64_t seed) {
    if (candidates.empty()) throw ConfigError("cross_validate_complexity: no candidates");
    const FoldPlan plan = make_folds(data.y, k, true, Rng::derive(seed, "cv-folds"));

    // Per-fold training sets are shared across candidates so the
    // comparison is paired.
    std::vector<TrainingSet> fold_train, fold_val;
    for (int f = 0; f < k; ++f) {
        TrainingSet tr = data.subset_rows(plan.train_rows(f));
        if (config.oversample) tr = oversample(tr, Rng::derive(seed, "cv-oversample", f));
        fold_train.push_back(std::move(tr));
        fold_val.push_back(data.subset_rows(plan.fold_rows(f)));
    }

    CvOutcome out;
    out.scores.reserve(candidates.size());
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        const auto& cand = candidates[ci];
        CvScore sc;
        sc.candidate = cand;
        double sum = 0.0;
        for (int f = 0; f < k; ++f) {
            TrainingConfig tc = config;
            tc.weight_decay = cand.lambda;
            tc.seed = Rng::derive(seed, "cv-train", f);

            // Smallest validation MSE among this fold's restarts.
            double fold_best = std::numeric_limits<double>::infinity();
            int n_ok = 0;
            const NetworkSpec spec = conventional_spec(static_cast<int>(data.n_features), cand.n_hidden);
            for (int r = 0; r < tc.n_restarts; ++r) {
                Network net = init_network(spec, tc.init_scale,
                                           Rng::derive(tc.seed, "restart", static_cast<std::uint64_t>(r)));
                TrainResult res = train(std::move(net), fold_train[f], tc);
                if (res.aborted) continue;
                fold_best = std::min(fold_best, mean_squared_error(res.net, fold_val[f]));
                ++n_ok;
            }
            if (n_ok == 0) {
                sc.failed = true;
                break;
            }
            sum += fold_best;
        }
        if (!sc.failed) sc.score = sum / static_cast<double>(k);
        out.scores.push_back(sc);
    }

    const CvScore* best = nullptr;
    for (const auto& sc : out.scores) {
        if (sc.failed) continue;
        if (!best) {
            best = &sc;
            continue;
        }
        const auto params = [&](const CvCandidate& c) {
            return subnet_param_count(SubnetShape{static_cast<int>(data.n_features), c.n_hidden});
        };
        const bool better =
            sc.score < best->score ||
            (sc.score == best->score && (params(sc.candidate) < params(best->candidate) ||
                                         (params(sc.candidate) == params(best->candidate) &&
                                          sc.candidate.lambda < best->candidate.lambda)));
        if (better) best = &sc;
    }
    if (!best) throw PipelineError("cross_validate_complexity: every candidate failed to train");
    out.best = best->candidate;
    out.best_score = best->score;
    return out;
}

namespace {

void accumulate_summary(std::vector<double>& values, MetricSummary& s) {
    s.n_folds = static_cast<int>(values.size());
    if (values.empty()) return;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    s.mean = mean;
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        s.sd = std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
    }
}

} // namespace

CrossTestResult cross_test(const FeatureMatrix& matrix, int k_prime, bool stratified,
                           std::uint64_t seed, double threshold, const ModelFactory& factory) {
    CrossTestResult res;
    res.plan = make_folds(matrix.labels, k_prime, stratified, Rng::derive(seed, "cross-test"));

    std::vector<int> times_held_out(matrix.rows(), 0);
    std::vector<double> npvs, ppvs, reductions, corrects;
    for (int f = 0; f < k_prime; ++f) {
        const auto train_idx = res.plan.train_rows(f);
        const auto est_idx = res.plan.fold_rows(f);

        FeatureMatrix train;
        train.feature_names = matrix.feature_names;
        train.hub_of = matrix.hub_of;
        for (auto r : train_idx) {
            train.patient_ids.push_back(matrix.patient_ids[r]);
            train.labels.push_back(matrix.labels[r]);
            for (std::size_t c = 0; c < matrix.cols(); ++c) {
                train.values.push_back(matrix.at(r, c));
                train.missing.push_back(matrix.is_missing(r, c) ? 1 : 0);
            }
        }

        const Scorer scorer = factory(train, f, Rng::derive(seed, "fold", f));

        FoldEval fe;
        fe.fold = f;
        for (auto r : est_idx) {
            ++times_held_out[r];
            std::vector<double> row(matrix.cols());
            for (std::size_t c = 0; c < matrix.cols(); ++c) row[c] = matrix.at(r, c);
            const double p = scorer.score(row);
            const int pred = p >= threshold ? 1 : 0;
            if (pred == 1)
                (matrix.labels[r] == 1 ? fe.cm.tp : fe.cm.fp) += 1;
            else
                (matrix.labels[r] == 0 ? fe.cm.tn : fe.cm.fn) += 1;
        }
        fe.m = metrics(fe.cm);
        if (!fe.m.npv)
            res.warnings.push_back("fold " + std::to_string(f) +
                                   ": NPV undefined (no negative prediction); excluded from the mean");
        else
            npvs.push_back(*fe.m.npv);
        if (!fe.m.ppv)
            res.warnings.push_back("fold " + std::to_string(f) +
                                   ": PPV undefined (no positive prediction); excluded from the mean");
        else
            ppvs.push_back(*fe.m.ppv);
        reductions.push_back(fe.m.implant_reduction);
        corrects.push_back(static_cast<double>(fe.m.correctly_classified));
        res.folds.push_back(std::move(fe));
    }

    for (auto t : times_held_out)
        if (t != 1) throw PipelineError("cross_test: a row was not held out exactly once");

    std::vector<ConfusionMatrix> cms;
    for (const auto& fe : res.folds) cms.push_back(fe.cm);
    res.pooled = aggregate(cms);
    res.pooled_metrics = metrics(res.pooled);
    accumulate_summary(npvs, res.npv);
    accumulate_summary(ppvs, res.ppv);
    accumulate_summary(reductions, res.reduction);
    accumulate_summary(corrects, res.correct);
    return res;
}

} // namespace holterisk
