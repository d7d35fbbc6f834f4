#ifndef HOLTERISK_RHYTHM_HPP
#define HOLTERISK_RHYTHM_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace holterisk {

struct RRInterval {
    double onset_ms = 0.0; // time of the first beat of the pair
    double rr_ms = 0.0;
    BeatType pre = BeatType::Normal;
    BeatType post = BeatType::Normal;
    bool normal_normal() const { return pre == BeatType::Normal && post == BeatType::Normal; }
};

struct RRSeries {
    std::vector<RRInterval> intervals; // count = beats - 1
    double duration_ms = 0.0;
};

struct TriggerCounts {
    long bigeminy_episodes = 0;
    long trigeminy_episodes = 0;
    long nsvt_episodes = 0;
    long pac_count = 0;
    long pac_couplets = 0;
};

struct FeatureConfig {
    double min_hr_window_s = 60.0;   // sliding window for minimum heart rate
    double sdann_segment_s = 300.0;  // 5-minute segments fit a 30-minute record
    double hrv_threshold_ms = 50.0;  // pNN-style successive-difference threshold
};

FeatureConfig feature_config_from(const class KeyValueConfig& kv);

RRSeries to_rr(const BeatSeries& series);

// All HRV descriptors below use only intervals flanked by NORMAL beats.

double mean_rr(const RRSeries& rr);

// Minimum over onset-anchored sliding windows of 60000 / windowed mean
// NN interval. Windows that would extend past the record are skipped.
double min_heart_rate(const RRSeries& rr, double window_s);

// Std (n-1) of per-segment mean NN intervals over consecutive
// non-overlapping segments; trailing partial segment dropped.
double sdann(const RRSeries& rr, double segment_s);

// Dispersion of adjacent NN pairs along the identity line:
// SD2 = sqrt(2*SDNN^2 - SD1^2), SD1 = std((RR_{i+1}-RR_i)/sqrt 2),
// with SDNN^2 the symmetrized variance of the lag-1 pair cloud.
double poincare_sd2(const RRSeries& rr);

// Percentage of successive NN differences with |diff| > threshold.
double hrv_index(const RRSeries& rr, double threshold_ms);

// Mean turbulence onset over PVCs with a clean context (two NN
// intervals before the coupling interval and two after the
// compensatory pause). nullopt when no PVC qualifies.
std::optional<double> turbulence_onset(const BeatSeries& series, const RRSeries& rr);

// Pattern counts over the beat-type string; maximal non-overlapping
// matches, left to right.
TriggerCounts detect_triggers(const BeatSeries& series);

// Canonical feature column names (Table-1 rhythm rows).
extern const std::vector<std::string> kRhythmFeatureNames;

// Every rhythm feature, with per-feature insufficiency mapped to a
// missing cell rather than zero.
std::map<std::string, std::optional<double>> compute_feature_row(const BeatSeries& series,
                                                                 const FeatureConfig& config);

} // namespace holterisk

#endif
