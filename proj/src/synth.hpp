#ifndef HOLTERISK_SYNTH_HPP
#define HOLTERISK_SYNTH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "types.hpp"

namespace holterisk {

class KeyValueConfig;

struct SynthSpec {
    int n_patients = 186;
    int n_positives = 44;
    int substrate_features = 9;
    int substrate_informative = 7;
    int ans_features = 8;
    int ans_informative = 6;
    int trigger_features = 8;
    int trigger_informative = 5;
    double delta = 1.0;          // positive-class mean shift, within-class SD units per hub
    double missing_rate = 0.0;   // iid per-cell missingness
    int complete_rows = -1;      // >= 0: engineer exactly this many complete rows instead
    double hub_correlation = 0.3; // shared-factor loading within each hub
    bool with_beats = false;
    double beat_minutes = 30.0;
};

SynthSpec synth_spec_from(const KeyValueConfig& kv);

struct SyntheticCohort {
    std::vector<PatientRecord> records;
    FeatureMatrix matrix; // hubs assigned
    std::map<std::string, Hub> hub_map;
    std::vector<std::string> informative; // planted ground truth
    std::vector<BeatSeries> beat_series;  // parallel to records when with_beats
};

// Deterministic given (spec, seed). Each hub's features share one noise
// factor so the hubs carry structure, and the informative columns of a
// hub split the delta shift along a unit direction. Beat series, when
// requested, are assembled so their trigger-pattern counts follow the
// tabular trigger columns monotonically.
SyntheticCohort generate_synthetic_cohort(const SynthSpec& spec, std::uint64_t seed);

} // namespace holterisk

#endif
