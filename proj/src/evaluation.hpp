#ifndef HOLTERISK_EVALUATION_HPP
#define HOLTERISK_EVALUATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "training.hpp"
#include "types.hpp"

namespace holterisk {

struct FoldPlan {
    int k = 0;
    std::vector<int> assignment; // row -> fold index
    bool stratified = true;
    std::uint64_t seed = 0;

    std::vector<std::size_t> fold_rows(int fold) const;
    std::vector<std::size_t> train_rows(int fold) const;
};

// Disjoint covering folds; stratified keeps per-fold class counts
// within one of each other ("homogenous" subsets).
FoldPlan make_folds(const std::vector<int>& labels, int k, bool stratified, std::uint64_t seed);

struct ConfusionMatrix {
    long tn = 0, fp = 0, fn = 0, tp = 0;
    long total() const { return tn + fp + fn + tp; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        tp += o.tp;
        return *this;
    }
};

struct Metrics {
    std::optional<double> npv;  // percent; nullopt when tn + fn == 0
    std::optional<double> ppv;  // percent; nullopt when tp + fp == 0
    double implant_reduction = 0.0; // percent of patients spared implantation
    long correctly_classified = 0;
    long total = 0;
};

Metrics metrics(const ConfusionMatrix& cm);

ConfusionMatrix aggregate(std::span<const ConfusionMatrix> matrices);

// One-sided exact paired sign-flip permutation test on per-fold
// correctly-classified counts; small p supports "b beats a".
double compare_classifiers(const std::vector<long>& correct_a, const std::vector<long>& correct_b);

struct CvCandidate {
    int n_hidden = 0;
    double lambda = 0.0;
};

struct CvScore {
    CvCandidate candidate;
    double score = 0.0; // mean over folds of the best validation MSE
    bool failed = false;
};

struct CvOutcome {
    CvCandidate best;
    double best_score = 0.0;
    std::vector<CvScore> scores;
};

// K-fold complexity selection: per fold, train each candidate on the
// other K-1 folds (oversampled when configured) with restarts, keep the
// smallest validation MSE among restarts; the candidate minimizing the
// fold-mean wins. Ties break toward fewer parameters, then smaller
// lambda.
CvOutcome cross_validate_complexity(const TrainingSet& data, const std::vector<CvCandidate>& candidates,
                                    int k, const TrainingConfig& config, std::uint64_t seed);

// A trained model ready to score raw (unstandardized) feature rows in
// the column order of the evaluation matrix.
struct Scorer {
    std::function<double(std::span<const double>)> score;
};

// Builds a Scorer from the training-fold rows only; everything the
// model learns (scaling, selection, parameters) must come from `train`.
using ModelFactory =
    std::function<Scorer(const FeatureMatrix& train, int fold, std::uint64_t fold_seed)>;

struct FoldEval {
    int fold = 0;
    ConfusionMatrix cm;
    Metrics m;
};

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0; // n-1 over folds with a defined value
    int n_folds = 0; // folds contributing
};

struct CrossTestResult {
    FoldPlan plan;
    std::vector<FoldEval> folds;
    ConfusionMatrix pooled;
    Metrics pooled_metrics;
    MetricSummary npv, ppv, reduction, correct;
    std::vector<std::string> warnings; // undefined per-fold ratios, etc.
};

// The K'-fold cross-test: each row is scored exactly once as held-out
// by a model built from the other folds.
CrossTestResult cross_test(const FeatureMatrix& matrix, int k_prime, bool stratified,
                           std::uint64_t seed, double threshold, const ModelFactory& factory);

} // namespace holterisk

#endif
