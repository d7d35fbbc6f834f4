#ifndef HOLTERISK_SELECTION_HPP
#define HOLTERISK_SELECTION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "types.hpp"

namespace holterisk {

class KeyValueConfig;

struct RankedFeature {
    std::string name;
    int rank = 0;           // 1-based
    double relevance = 0.0; // squared cosine with the residual target at selection time
};

// Column-major working set for the ranking routines.
struct ColumnSet {
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;
    std::size_t n_rows() const { return cols.empty() ? 0 : cols[0].size(); }
};

struct RankingResult {
    std::vector<RankedFeature> ranked;
    std::vector<std::string> dropped; // collinear columns lost mid-orthogonalization
};

// rho[k-1] = estimated probability that a feature accepted at rank k
// ranks no better than the random probe. Non-decreasing by construction.
struct RiskCurve {
    std::vector<double> rho;
};

struct SelectionConfig {
    double rho_max = 0.10;
    int n_probe_realizations = 100;
    bool per_hub = true;
    std::uint64_t seed = 0;
};

SelectionConfig selection_config_from(const KeyValueConfig& kv);

// Greedy forward ranking by squared cosine with the residual target,
// orthogonalizing survivors against each pick (modified Gram-Schmidt).
// Columns must be standardized and y centered.
RankingResult gram_schmidt_rank(const ColumnSet& x, const std::vector<double>& y,
                                double drop_tol = 1e-10);

// Rank with a fresh standard-normal probe column appended, once per
// realization; rho_k = fraction of realizations where the probe took
// rank <= k. Deterministic given config.seed.
RiskCurve probe_risk(const ColumnSet& x, const std::vector<double>& y, const SelectionConfig& config);

// Maximal prefix of the ranking whose every rank keeps rho_k <= rho_max.
std::vector<std::string> select_features(const std::vector<RankedFeature>& ranking,
                                         const RiskCurve& risk, double rho_max);

struct HubSelection {
    Hub hub = Hub::Substrate;
    std::vector<RankedFeature> ranking;
    RiskCurve risk;
    std::vector<std::string> selected;
};

struct SelectionResult {
    std::vector<HubSelection> hubs;           // substrate, ans, triggers order (present hubs only)
    std::vector<std::string> selected_union;  // hub order, rank order within hub
    bool per_hub_mode = true;
    std::vector<std::string> warnings;
};

// Centered 0/1 labels as the ranking target.
std::vector<double> centered_label_target(const std::vector<int>& labels);

// Rank + risk + prefix selection per hub (or globally when
// config.per_hub is false). The matrix must be complete with hubs
// assigned; columns are standardized internally on the given rows.
SelectionResult select_per_hub(const FeatureMatrix& matrix, const SelectionConfig& config);

} // namespace holterisk

#endif
