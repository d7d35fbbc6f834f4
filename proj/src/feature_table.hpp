#ifndef HOLTERISK_FEATURE_TABLE_HPP
#define HOLTERISK_FEATURE_TABLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "rhythm.hpp"
#include "types.hpp"

namespace holterisk {

// Accumulates one feature row per patient: computed rhythm features
// plus merged precomputed columns (substrate morphology, labels). The
// output is a cohort-CSV; labels unknown at write time stay empty.
class FeatureTable {
public:
    explicit FeatureTable(FeatureConfig config) : config_(config) {}

    void add_patient(const std::string& patient_id, const BeatSeries& series);

    // CSV with header `patient_id[,label],<column>...`. Columns are
    // unioned; patients not seen before get a new row.
    void merge_csv(const std::string& path);

    void write(const std::string& path) const;

    std::size_t n_rows() const { return rows_.size(); }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    struct Row {
        std::string id;
        std::optional<int> label;
        std::map<std::string, std::optional<double>> cells;
    };

    Row& row_for(const std::string& id);

    FeatureConfig config_;
    std::vector<Row> rows_;
    std::vector<std::string> merged_columns_; // first-seen order
    std::vector<std::string> warnings_;
};

} // namespace holterisk

#endif
