#ifndef HOLTERISK_COHORT_HPP
#define HOLTERISK_COHORT_HPP

#include <set>
#include <string>
#include <vector>

#include "types.hpp"

namespace holterisk {

struct Cohort {
    FeatureMatrix matrix;
    std::vector<PatientRecord> records; // records[i] mirrors matrix row i
    std::vector<std::string> warnings;
};

// cohort-CSV: header `patient_id,label,<feature>...`, one row per
// patient, empty cell or NA = missing. Unparseable numeric cells are
// demoted to missing with a warning; label problems are hard errors.
Cohort load_cohort(const std::string& path);
Cohort parse_cohort(const std::string& text, const std::string& origin);

void write_cohort(const FeatureMatrix& matrix, const std::string& path);

// Rows with no missing value among `required`; column set unchanged.
FeatureMatrix filter_complete(const FeatureMatrix& matrix, const std::set<std::string>& required);

// Fit mean/sd (n-1 convention) on the given rows; empty = all rows.
ScalingParams fit_scaling(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows = {});

// Column-wise (x - mean) / sd using previously fitted params.
FeatureMatrix apply_scaling(const FeatureMatrix& matrix, const ScalingParams& params);

// Inverse transform, for round-trip checks and report output.
FeatureMatrix invert_scaling(const FeatureMatrix& matrix, const ScalingParams& params);

struct StandardizeResult {
    FeatureMatrix matrix;
    ScalingParams params;
};

// fit_scaling + apply_scaling on a complete matrix.
StandardizeResult standardize(const FeatureMatrix& matrix);

struct HubAssignResult {
    FeatureMatrix matrix;
    std::vector<std::string> warnings; // mapping entries that matched no column
};

HubAssignResult assign_hubs(const FeatureMatrix& matrix, const std::map<std::string, Hub>& mapping);

// hub-map file: `feature_name = SUBSTRATE|ANS|TRIGGERS`, '#' comments.
std::map<std::string, Hub> load_hub_map(const std::string& path);
std::map<std::string, Hub> parse_hub_map(const std::string& text, const std::string& origin);
void write_hub_map(const std::map<std::string, Hub>& mapping, const std::string& path);

} // namespace holterisk

#endif
