#include "synth.hpp"

#include <algorithm>
#include <cmath>

#include "config.hpp"
#include "rng.hpp"

namespace holterisk {

SynthSpec synth_spec_from(const KeyValueConfig& kv) {
    SynthSpec s;
    s.n_patients = static_cast<int>(kv.get_int("synth_patients", s.n_patients));
    s.n_positives = static_cast<int>(kv.get_int("synth_positives", s.n_positives));
    s.substrate_features = static_cast<int>(kv.get_int("synth_substrate", s.substrate_features));
    s.substrate_informative =
        static_cast<int>(kv.get_int("synth_substrate_informative", s.substrate_informative));
    s.ans_features = static_cast<int>(kv.get_int("synth_ans", s.ans_features));
    s.ans_informative = static_cast<int>(kv.get_int("synth_ans_informative", s.ans_informative));
    s.trigger_features = static_cast<int>(kv.get_int("synth_triggers", s.trigger_features));
    s.trigger_informative =
        static_cast<int>(kv.get_int("synth_triggers_informative", s.trigger_informative));
    s.delta = kv.get_double("synth_delta", s.delta);
    s.missing_rate = kv.get_double("synth_missing_rate", s.missing_rate);
    s.complete_rows = static_cast<int>(kv.get_int("synth_complete_rows", s.complete_rows));
    s.hub_correlation = kv.get_double("synth_hub_correlation", s.hub_correlation);
    s.with_beats = kv.get_bool("synth_beats", s.with_beats);
    s.beat_minutes = kv.get_double("synth_beat_minutes", s.beat_minutes);
    return s;
}

namespace {

void validate(const SynthSpec& s) {
    if (s.n_patients < 2) throw ConfigError("synth: need at least 2 patients");
    if (s.n_positives < 0 || s.n_positives > s.n_patients)
        throw ConfigError("synth: n_positives must be in [0, n_patients]");
    auto check_hub = [](const char* name, int total, int informative) {
        if (total < 0 || informative < 0 || informative > total)
            throw ConfigError(std::string("synth: bad feature counts for hub ") + name);
    };
    check_hub("substrate", s.substrate_features, s.substrate_informative);
    check_hub("ans", s.ans_features, s.ans_informative);
    check_hub("triggers", s.trigger_features, s.trigger_informative);
    if (s.substrate_features + s.ans_features + s.trigger_features == 0)
        throw ConfigError("synth: no features requested");
    if (s.delta < 0) throw ConfigError("synth: delta must be >= 0");
    if (s.missing_rate < 0 || s.missing_rate >= 1) throw ConfigError("synth: missing_rate must be in [0, 1)");
    if (s.complete_rows > s.n_patients) throw ConfigError("synth: complete_rows exceeds n_patients");
    if (s.hub_correlation < 0 || s.hub_correlation >= 1)
        throw ConfigError("synth: hub_correlation must be in [0, 1)");
    if (s.beat_minutes <= 0) throw ConfigError("synth: beat_minutes must be > 0");
}

std::string patient_id(int i, int n) {
    int width = 1;
    for (int v = n; v >= 10; v /= 10) ++width;
    std::string digits = std::to_string(i + 1);
    return "P" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

struct HubPlan {
    Hub hub;
    std::string prefix;
    int total;
    int informative;
};

// Beat-string assembly: events separated by long sinus runs so the
// trigger patterns stay countable exactly as planted.
struct BeatEvent {
    enum class Kind { Bigeminy, Trigeminy, Nsvt, PacCouplet, PacSingle, IsolatedPvc } kind;
    int size = 0; // pattern repetitions or run length
};

BeatSeries make_beat_series(Rng& rng, double minutes, long bigeminy, long trigeminy, long nsvt,
                            long pac_singles, long pac_couplets) {
    std::vector<BeatEvent> events;
    using K = BeatEvent::Kind;
    for (long i = 0; i < bigeminy; ++i)
        events.push_back({K::Bigeminy, 3 + static_cast<int>(rng.uniform_int(3))});
    for (long i = 0; i < trigeminy; ++i)
        events.push_back({K::Trigeminy, 3 + static_cast<int>(rng.uniform_int(2))});
    for (long i = 0; i < nsvt; ++i)
        events.push_back({K::Nsvt, 3 + static_cast<int>(rng.uniform_int(4))});
    for (long i = 0; i < pac_couplets; ++i) events.push_back({K::PacCouplet, 2});
    for (long i = 0; i < pac_singles; ++i) events.push_back({K::PacSingle, 1});
    events.push_back({K::IsolatedPvc, 1}); // keeps turbulence onset computable
    events.push_back({K::IsolatedPvc, 1});
    rng.shuffle(events);

    const double mu = 700.0 + 250.0 * rng.uniform(); // patient's base RR
    BeatSeries series;
    double t = 0.0;
    auto push = [&](BeatType type, double rr) {
        t += rr;
        series.beats.push_back(Beat{t, type});
    };
    auto sinus_rr = [&] { return std::clamp(mu + 40.0 * rng.normal(), 400.0, 1800.0); };
    auto sinus_run = [&](int len) {
        for (int i = 0; i < len; ++i) push(BeatType::Normal, sinus_rr());
    };

    series.beats.push_back(Beat{0.0, BeatType::Normal});
    sinus_run(8);
    for (const auto& ev : events) {
        switch (ev.kind) {
        case K::Bigeminy:
            for (int i = 0; i < ev.size; ++i) {
                push(BeatType::Normal, sinus_rr());
                push(BeatType::Pvc, 0.55 * mu);
            }
            push(BeatType::Normal, 1.45 * mu);
            break;
        case K::Trigeminy:
            for (int i = 0; i < ev.size; ++i) {
                push(BeatType::Normal, sinus_rr());
                push(BeatType::Normal, sinus_rr());
                push(BeatType::Pvc, 0.55 * mu);
            }
            push(BeatType::Normal, 1.45 * mu);
            break;
        case K::Nsvt:
            push(BeatType::Pvc, 0.55 * mu);
            for (int i = 1; i < ev.size; ++i) push(BeatType::Pvc, 430.0 + 60.0 * rng.uniform());
            push(BeatType::Normal, 1.45 * mu);
            break;
        case K::PacCouplet:
            push(BeatType::Pac, 0.7 * mu);
            push(BeatType::Pac, 0.7 * mu);
            push(BeatType::Normal, 1.2 * mu);
            break;
        case K::PacSingle:
            push(BeatType::Pac, 0.7 * mu);
            push(BeatType::Normal, 1.2 * mu);
            break;
        case K::IsolatedPvc:
            push(BeatType::Pvc, 0.55 * mu);
            push(BeatType::Normal, 1.45 * mu);
            break;
        }
        sinus_run(8 + static_cast<int>(rng.uniform_int(6)));
    }
    const double target_ms = minutes * 60000.0;
    while (t < target_ms) push(BeatType::Normal, sinus_rr());
    series.duration_ms = t;
    return series;
}

long planned_count(double value, double base, double scale, long cap) {
    const double raw = base + scale * value;
    const long rounded = static_cast<long>(std::lround(raw));
    return std::clamp(rounded, 0L, cap);
}

} // namespace

SyntheticCohort generate_synthetic_cohort(const SynthSpec& spec, std::uint64_t seed) {
    validate(spec);
    SyntheticCohort out;
    const int n = spec.n_patients;

    const std::vector<HubPlan> hubs = {
        {Hub::Substrate, "substrate", spec.substrate_features, spec.substrate_informative},
        {Hub::Ans, "ans", spec.ans_features, spec.ans_informative},
        {Hub::Triggers, "trigger", spec.trigger_features, spec.trigger_informative},
    };

    auto& m = out.matrix;
    for (const auto& hp : hubs) {
        for (int j = 0; j < hp.informative; ++j) {
            const std::string name = hp.prefix + "_sig" + std::to_string(j + 1);
            m.feature_names.push_back(name);
            out.hub_map[name] = hp.hub;
            out.informative.push_back(name);
        }
        for (int j = hp.informative; j < hp.total; ++j) {
            const std::string name = hp.prefix + "_noise" + std::to_string(j - hp.informative + 1);
            m.feature_names.push_back(name);
            out.hub_map[name] = hp.hub;
        }
    }
    m.hub_of = out.hub_map;
    m.resize(static_cast<std::size_t>(n), m.feature_names.size());

    Rng label_rng(Rng::derive(seed, "labels"));
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < spec.n_positives; ++i) labels[static_cast<std::size_t>(i)] = 1;
    label_rng.shuffle(labels);
    m.labels = labels;
    for (int i = 0; i < n; ++i) m.patient_ids[static_cast<std::size_t>(i)] = patient_id(i, n);

    // Hub-structured values: one shared factor per (patient, hub), unit
    // idiosyncratic noise, and a delta shift split evenly across the
    // hub's informative columns for positives.
    const double fl = std::sqrt(spec.hub_correlation);
    const double el = std::sqrt(1.0 - spec.hub_correlation);
    std::size_t col = 0;
    for (const auto& hp : hubs) {
        if (hp.total == 0) continue;
        Rng rng(Rng::derive(seed, hp.prefix));
        std::vector<double> factor(static_cast<std::size_t>(n));
        for (auto& f : factor) f = rng.normal();
        const double shift = hp.informative > 0 ? spec.delta / std::sqrt(hp.informative) : 0.0;
        for (int j = 0; j < hp.total; ++j, ++col) {
            const bool informative = j < hp.informative;
            for (int i = 0; i < n; ++i) {
                double v = fl * factor[static_cast<std::size_t>(i)] + el * rng.normal();
                if (informative && labels[static_cast<std::size_t>(i)] == 1) v += shift;
                m.set(static_cast<std::size_t>(i), col, v);
            }
        }
    }

    // Missingness: either iid cells or an exact complete-case count.
    if (spec.complete_rows >= 0) {
        Rng rng(Rng::derive(seed, "missing"));
        const std::size_t n_incomplete = static_cast<std::size_t>(n - spec.complete_rows);
        for (auto r : rng.sample_without_replacement(static_cast<std::size_t>(n), n_incomplete)) {
            const std::size_t k_cells = 1 + rng.uniform_int(3);
            for (auto c : rng.sample_without_replacement(m.cols(), std::min(k_cells, m.cols())))
                m.set_missing(r, c);
        }
    } else if (spec.missing_rate > 0.0) {
        Rng rng(Rng::derive(seed, "missing"));
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (rng.uniform() < spec.missing_rate) m.set_missing(r, c);
    }

    // Beat series follow the tabular trigger columns monotonically: a
    // higher column value plans more of the matching pattern.
    if (spec.with_beats) {
        const std::size_t trig_begin = m.cols() - static_cast<std::size_t>(spec.trigger_features);
        for (int i = 0; i < n; ++i) {
            Rng rng(Rng::derive(seed, "beats", static_cast<std::uint64_t>(i)));
            auto trig_value = [&](int slot) {
                if (spec.trigger_features == 0) return 0.0;
                const auto c = trig_begin + static_cast<std::size_t>(slot % spec.trigger_features);
                return m.is_missing(static_cast<std::size_t>(i), c)
                           ? 0.0
                           : m.at(static_cast<std::size_t>(i), c);
            };
            const long bigeminy = planned_count(trig_value(0), 1.5, 1.0, 6);
            const long trigeminy = planned_count(trig_value(1), 1.5, 1.0, 6);
            const long nsvt = planned_count(trig_value(2), 1.5, 1.0, 6);
            const long singles = planned_count(trig_value(3), 5.0, 2.0, 24);
            const long couplets = planned_count(trig_value(4), 2.0, 1.0, 8);
            out.beat_series.push_back(
                make_beat_series(rng, spec.beat_minutes, bigeminy, trigeminy, nsvt, singles, couplets));
        }
    }

    for (int i = 0; i < n; ++i) {
        PatientRecord rec;
        rec.id = m.patient_ids[static_cast<std::size_t>(i)];
        rec.label = labels[static_cast<std::size_t>(i)];
        if (spec.with_beats) rec.beat_series_ref = "beats/" + rec.id + ".csv";
        for (std::size_t c = 0; c < m.cols(); ++c)
            rec.features[m.feature_names[c]] =
                m.is_missing(static_cast<std::size_t>(i), c)
                    ? std::optional<double>()
                    : std::optional<double>(m.at(static_cast<std::size_t>(i), c));
        out.records.push_back(std::move(rec));
    }
    return out;
}

} // namespace holterisk
