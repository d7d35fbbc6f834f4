#ifndef HOLTERISK_PIPELINE_HPP
#define HOLTERISK_PIPELINE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adhoc.hpp"
#include "selection.hpp"

namespace holterisk {

class KeyValueConfig;

struct ProtocolConfig {
    int cv_folds = 10;          // K, complexity selection
    int cross_test_folds = 10;  // K', performance estimation
    std::vector<int> hidden_grid{0, 1, 2, 3};
    std::vector<double> lambda_grid{1e-4, 1e-3, 1e-2};
    bool reuse_global_selection = false; // one selection on the whole cohort instead of per fold
    bool adhoc_restart_by_accuracy = false;
};

struct ExperimentConfig {
    SelectionConfig selection;
    TrainingConfig training;
    ProtocolConfig protocol;
    std::uint64_t seed = 0;
};

ExperimentConfig experiment_config_from(const KeyValueConfig& kv);

struct ChosenComplexity {
    std::string scope; // "conventional" or a hub name
    int n_hidden = 0;
    double lambda = 0.0;
    double cv_score = 0.0;
};

struct FoldModelInfo {
    int fold = 0;
    std::vector<std::pair<std::string, std::vector<std::string>>> selected_per_hub;
    std::vector<std::string> selected_union;
    std::vector<ChosenComplexity> complexity;
    std::vector<std::string> warnings;
};

struct ArchitectureResult {
    std::string name; // "conventional" / "adhoc"
    CrossTestResult ct;
    std::vector<FoldModelInfo> fold_info;
};

struct EvaluationReport {
    ArchitectureResult conventional;
    ArchitectureResult adhoc;
    double p_value = 1.0; // one-sided: ad hoc improves on conventional
    std::optional<SelectionResult> global_selection;
    bool reused_global_selection = false;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config_echo;
    std::vector<std::string> warnings;
};

enum class Architecture { Conventional, AdHoc };

// Factory used per cross-test fold: selection (unless a fixed global
// set is given), scaling fit, complexity selection and training, all on
// the training rows only. Appends one FoldModelInfo per invocation.
ModelFactory make_model_factory(Architecture arch, const ExperimentConfig& cfg,
                                const std::optional<SelectionResult>& global_selection,
                                std::vector<FoldModelInfo>& info_sink);

// Selection, complexity selection and the K'-fold cross-test for both
// architectures on shared folds, plus the paired comparison.
EvaluationReport run_full_protocol(const FeatureMatrix& complete, const ExperimentConfig& cfg);

} // namespace holterisk

#endif
