#ifndef HOLTERISK_TYPES_HPP
#define HOLTERISK_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace holterisk {

enum class Hub { Substrate, Ans, Triggers };

const char* hub_name(Hub h);
std::optional<Hub> hub_from_name(const std::string& s);

enum class BeatType { Normal, Pvc, Pac, Other };

char beat_code(BeatType t);
std::optional<BeatType> beat_from_code(char c);

struct Beat {
    double time_ms = 0.0;
    BeatType type = BeatType::Normal;
};

// Timestamped, type-annotated heartbeat sequence for one patient.
struct BeatSeries {
    std::vector<Beat> beats;
    double duration_ms = 0.0;
};

struct PatientRecord {
    std::string id;
    int label = 0; // 1 = treated ventricular arrhythmia within six months
    std::optional<std::string> beat_series_ref;
    std::map<std::string, std::optional<double>> features; // nullopt = missing
};

// Patients x named features, with a per-cell missing mask. Hub tags are
// attached by assign_hubs and stay empty until then.
struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::vector<std::string> patient_ids;
    std::vector<int> labels;
    std::vector<double> values;        // row-major, rows() x cols()
    std::vector<std::uint8_t> missing; // same shape; 1 = missing
    std::map<std::string, Hub> hub_of;

    std::size_t rows() const { return patient_ids.size(); }
    std::size_t cols() const { return feature_names.size(); }

    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
    bool is_missing(std::size_t r, std::size_t c) const { return missing[r * cols() + c] != 0; }
    void set(std::size_t r, std::size_t c, double v) {
        values[r * cols() + c] = v;
        missing[r * cols() + c] = 0;
    }
    void set_missing(std::size_t r, std::size_t c) {
        values[r * cols() + c] = 0.0;
        missing[r * cols() + c] = 1;
    }

    std::optional<std::size_t> col_index(const std::string& name) const {
        for (std::size_t i = 0; i < feature_names.size(); ++i)
            if (feature_names[i] == name) return i;
        return std::nullopt;
    }

    bool complete() const {
        for (auto m : missing)
            if (m) return false;
        return true;
    }

    std::size_t n_positive() const {
        std::size_t n = 0;
        for (int l : labels) n += (l == 1);
        return n;
    }

    void resize(std::size_t n_rows, std::size_t n_cols) {
        patient_ids.resize(n_rows);
        labels.assign(n_rows, 0);
        values.assign(n_rows * n_cols, 0.0);
        missing.assign(n_rows * n_cols, 0);
    }
};

// Per-feature mean / standard deviation fitted on some set of rows.
struct ScalingParams {
    std::vector<std::string> feature_names;
    std::vector<double> mean;
    std::vector<double> sd; // always > 0
};

} // namespace holterisk

#endif
