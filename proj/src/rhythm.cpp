#include "rhythm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "config.hpp"

namespace holterisk {

FeatureConfig feature_config_from(const KeyValueConfig& kv) {
    FeatureConfig fc;
    fc.min_hr_window_s = kv.get_double("min_hr_window_s", fc.min_hr_window_s);
    fc.sdann_segment_s = kv.get_double("sdann_segment_s", fc.sdann_segment_s);
    fc.hrv_threshold_ms = kv.get_double("hrv_threshold_ms", fc.hrv_threshold_ms);
    if (fc.min_hr_window_s <= 0 || fc.sdann_segment_s <= 0 || fc.hrv_threshold_ms < 0)
        throw ConfigError("rhythm feature config values must be positive");
    return fc;
}

RRSeries to_rr(const BeatSeries& series) {
    if (series.beats.size() < 2)
        throw InsufficientDataError("to_rr: need at least 2 beats, got " +
                                    std::to_string(series.beats.size()));
    RRSeries rr;
    rr.duration_ms = series.duration_ms;
    rr.intervals.reserve(series.beats.size() - 1);
    for (std::size_t i = 0; i + 1 < series.beats.size(); ++i) {
        const auto& a = series.beats[i];
        const auto& b = series.beats[i + 1];
        rr.intervals.push_back(RRInterval{a.time_ms, b.time_ms - a.time_ms, a.type, b.type});
    }
    return rr;
}

namespace {

std::vector<double> nn_values(const RRSeries& rr) {
    std::vector<double> out;
    for (const auto& iv : rr.intervals)
        if (iv.normal_normal()) out.push_back(iv.rr_ms);
    return out;
}

double sample_sd(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0));
}

} // namespace

double mean_rr(const RRSeries& rr) {
    const auto nn = nn_values(rr);
    if (nn.empty()) throw InsufficientDataError("mean_rr: no normal-normal intervals");
    double sum = 0.0;
    for (double v : nn) sum += v;
    return sum / static_cast<double>(nn.size());
}

double min_heart_rate(const RRSeries& rr, double window_s) {
    const double window_ms = window_s * 1000.0;
    if (rr.duration_ms < window_ms)
        throw InsufficientDataError("min_heart_rate: record shorter than the window");

    std::vector<const RRInterval*> nn;
    for (const auto& iv : rr.intervals)
        if (iv.normal_normal()) nn.push_back(&iv);
    if (nn.empty()) throw InsufficientDataError("min_heart_rate: no normal-normal intervals");

    double min_hr = std::numeric_limits<double>::infinity();
    std::size_t hi = 0;
    double running_sum = 0.0;
    for (std::size_t lo = 0; lo < nn.size(); ++lo) {
        const double start = nn[lo]->onset_ms;
        if (start + window_ms > rr.duration_ms) break;
        if (hi < lo) {
            hi = lo;
            running_sum = 0.0;
        }
        while (hi < nn.size() && nn[hi]->onset_ms < start + window_ms) {
            running_sum += nn[hi]->rr_ms;
            ++hi;
        }
        const std::size_t count = hi - lo;
        if (count > 0) min_hr = std::min(min_hr, 60000.0 * static_cast<double>(count) / running_sum);
        running_sum -= nn[lo]->rr_ms;
    }
    if (!std::isfinite(min_hr))
        throw InsufficientDataError("min_heart_rate: no window fits inside the record");
    return min_hr;
}

double sdann(const RRSeries& rr, double segment_s) {
    const double seg_ms = segment_s * 1000.0;
    if (rr.duration_ms < 2.0 * seg_ms)
        throw InsufficientDataError("sdann: need at least 2 full segments");
    const std::size_t n_segments = static_cast<std::size_t>(std::floor(rr.duration_ms / seg_ms));

    std::vector<double> sums(n_segments, 0.0);
    std::vector<std::size_t> counts(n_segments, 0);
    for (const auto& iv : rr.intervals) {
        if (!iv.normal_normal()) continue;
        const auto s = static_cast<std::size_t>(std::floor(iv.onset_ms / seg_ms));
        if (s >= n_segments) continue; // trailing partial segment
        sums[s] += iv.rr_ms;
        counts[s] += 1;
    }
    std::vector<double> means;
    for (std::size_t s = 0; s < n_segments; ++s)
        if (counts[s] > 0) means.push_back(sums[s] / static_cast<double>(counts[s]));
    if (means.size() < 2) throw InsufficientDataError("sdann: fewer than 2 segments with NN intervals");
    return sample_sd(means);
}

double poincare_sd2(const RRSeries& rr) {
    // Lag-1 cloud over adjacent NN intervals (the pair must be two
    // consecutive intervals of the record, both normal-normal).
    std::vector<std::pair<double, double>> cloud;
    std::size_t nn_count = 0;
    for (std::size_t i = 0; i < rr.intervals.size(); ++i) {
        if (rr.intervals[i].normal_normal()) ++nn_count;
        if (i + 1 < rr.intervals.size() && rr.intervals[i].normal_normal() &&
            rr.intervals[i + 1].normal_normal())
            cloud.emplace_back(rr.intervals[i].rr_ms, rr.intervals[i + 1].rr_ms);
    }
    if (nn_count < 3 || cloud.size() < 2)
        throw InsufficientDataError("poincare_sd2: need at least 3 normal-normal intervals");

    const double k = static_cast<double>(cloud.size());
    double ma = 0.0, mb = 0.0;
    for (const auto& [a, b] : cloud) {
        ma += a;
        mb += b;
    }
    ma /= k;
    mb /= k;
    double va = 0.0, vb = 0.0, cov = 0.0;
    for (const auto& [a, b] : cloud) {
        va += (a - ma) * (a - ma);
        vb += (b - mb) * (b - mb);
        cov += (a - ma) * (b - mb);
    }
    va /= (k - 1.0);
    vb /= (k - 1.0);
    cov /= (k - 1.0);

    const double sdnn_sq = 0.5 * (va + vb); // symmetrized marginal variance
    const double sd1_sq = sdnn_sq - cov;    // = var((b - a)/sqrt 2)
    const double sd2_sq = 2.0 * sdnn_sq - sd1_sq;
    return std::sqrt(std::max(0.0, sd2_sq));
}

double hrv_index(const RRSeries& rr, double threshold_ms) {
    std::size_t pairs = 0, above = 0;
    std::size_t nn_count = 0;
    for (std::size_t i = 0; i < rr.intervals.size(); ++i) {
        if (rr.intervals[i].normal_normal()) ++nn_count;
        if (i + 1 < rr.intervals.size() && rr.intervals[i].normal_normal() &&
            rr.intervals[i + 1].normal_normal()) {
            ++pairs;
            if (std::fabs(rr.intervals[i + 1].rr_ms - rr.intervals[i].rr_ms) > threshold_ms) ++above;
        }
    }
    if (nn_count < 2 || pairs == 0)
        throw InsufficientDataError("hrv_index: need at least 2 successive normal-normal intervals");
    return 100.0 * static_cast<double>(above) / static_cast<double>(pairs);
}

std::optional<double> turbulence_onset(const BeatSeries& series, const RRSeries& rr) {
    // Schmidt convention: the coupling interval and the compensatory
    // pause are excluded; RR-2,RR-1 precede the PVC, RR+1,RR+2 follow
    // the pause, and all six flanking beats must be normal.
    const auto& beats = series.beats;
    const auto& iv = rr.intervals;
    double sum = 0.0;
    std::size_t n_valid = 0;
    for (std::size_t p = 0; p < beats.size(); ++p) {
        if (beats[p].type != BeatType::Pvc) continue;
        if (p < 3 || p + 3 >= beats.size()) continue;
        bool ctx = true;
        for (std::size_t q : {p - 3, p - 2, p - 1, p + 1, p + 2, p + 3})
            if (beats[q].type != BeatType::Normal) ctx = false;
        if (!ctx) continue;
        const double rm2 = iv[p - 3].rr_ms; // beats p-3 -> p-2
        const double rm1 = iv[p - 2].rr_ms; // beats p-2 -> p-1
        const double rp1 = iv[p + 1].rr_ms; // beats p+1 -> p+2
        const double rp2 = iv[p + 2].rr_ms; // beats p+2 -> p+3
        sum += 100.0 * ((rp1 + rp2) - (rm2 + rm1)) / (rm2 + rm1);
        ++n_valid;
    }
    if (n_valid == 0) return std::nullopt;
    return sum / static_cast<double>(n_valid);
}

namespace {

constexpr double kNsvtMaxIntervalMs = 600.0; // 60000 / 100 bpm
constexpr long kNsvtMinBeats = 3;
constexpr long kNsvtMaxBeats = 29;

} // namespace

TriggerCounts detect_triggers(const BeatSeries& series) {
    if (series.beats.empty()) throw InsufficientDataError("detect_triggers: empty series");
    const auto& beats = series.beats;
    const std::size_t n = beats.size();
    TriggerCounts tc;

    auto type_at = [&](std::size_t i) { return beats[i].type; };

    // Bigeminy: >= 3 consecutive (N,V) pairs; greedy maximal scan.
    for (std::size_t i = 0; i < n;) {
        std::size_t pairs = 0;
        std::size_t j = i;
        while (j + 1 < n && type_at(j) == BeatType::Normal && type_at(j + 1) == BeatType::Pvc) {
            ++pairs;
            j += 2;
        }
        if (pairs >= 3) {
            ++tc.bigeminy_episodes;
            i = j;
        } else {
            ++i;
        }
    }

    // Trigeminy: >= 3 consecutive (N,N,V) triplets.
    for (std::size_t i = 0; i < n;) {
        std::size_t triplets = 0;
        std::size_t j = i;
        while (j + 2 < n && type_at(j) == BeatType::Normal && type_at(j + 1) == BeatType::Normal &&
               type_at(j + 2) == BeatType::Pvc) {
            ++triplets;
            j += 3;
        }
        if (triplets >= 3) {
            ++tc.trigeminy_episodes;
            i = j;
        } else {
            ++i;
        }
    }

    // NSVT: maximal run of consecutive PVCs whose internal intervals
    // all beat 100 bpm, 3..29 beats long. A slow interval or a non-PVC
    // beat ends the run; runs of 30+ are sustained VT, not counted.
    for (std::size_t i = 0; i < n;) {
        if (type_at(i) != BeatType::Pvc) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && type_at(j + 1) == BeatType::Pvc &&
               beats[j + 1].time_ms - beats[j].time_ms < kNsvtMaxIntervalMs)
            ++j;
        const long run = static_cast<long>(j - i + 1);
        if (run >= kNsvtMinBeats && run <= kNsvtMaxBeats) ++tc.nsvt_episodes;
        i = j + 1;
    }

    // PACs: total count plus maximal runs of exactly two.
    for (std::size_t i = 0; i < n;) {
        if (type_at(i) != BeatType::Pac) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && type_at(j + 1) == BeatType::Pac) ++j;
        const long run = static_cast<long>(j - i + 1);
        tc.pac_count += run;
        if (run == 2) ++tc.pac_couplets;
        i = j + 1;
    }

    return tc;
}

const std::vector<std::string> kRhythmFeatureNames = {
    "min_heart_rate", "mean_rr",  "sdann",     "poincare_sd2", "hrv_index",   "turbulence_onset",
    "ventricular_bigeminy", "ventricular_trigeminy", "nsvt_episodes", "pac_count", "pac_couplets",
};

std::map<std::string, std::optional<double>> compute_feature_row(const BeatSeries& series,
                                                                 const FeatureConfig& config) {
    std::map<std::string, std::optional<double>> row;
    for (const auto& name : kRhythmFeatureNames) row[name] = std::nullopt;
    if (series.beats.size() < 2) return row; // nothing computable from a lone beat

    const RRSeries rr = to_rr(series);
    auto guard = [&](const std::string& name, auto&& fn) {
        try {
            row[name] = fn();
        } catch (const InsufficientDataError&) {
            // left missing
        }
    };
    guard("min_heart_rate", [&] { return min_heart_rate(rr, config.min_hr_window_s); });
    guard("mean_rr", [&] { return mean_rr(rr); });
    guard("sdann", [&] { return sdann(rr, config.sdann_segment_s); });
    guard("poincare_sd2", [&] { return poincare_sd2(rr); });
    guard("hrv_index", [&] { return hrv_index(rr, config.hrv_threshold_ms); });
    row["turbulence_onset"] = turbulence_onset(series, rr);

    const TriggerCounts tc = detect_triggers(series);
    row["ventricular_bigeminy"] = static_cast<double>(tc.bigeminy_episodes);
    row["ventricular_trigeminy"] = static_cast<double>(tc.trigeminy_episodes);
    row["nsvt_episodes"] = static_cast<double>(tc.nsvt_episodes);
    row["pac_count"] = static_cast<double>(tc.pac_count);
    row["pac_couplets"] = static_cast<double>(tc.pac_couplets);
    return row;
}

} // namespace holterisk
