#include "selection.hpp"

#include <algorithm>
#include <cmath>

#include "config.hpp"
#include "rng.hpp"

namespace holterisk {

SelectionConfig selection_config_from(const KeyValueConfig& kv) {
    SelectionConfig sc;
    sc.rho_max = kv.get_double("rho_max", sc.rho_max);
    sc.n_probe_realizations = static_cast<int>(kv.get_int("probe_realizations", sc.n_probe_realizations));
    sc.per_hub = kv.get_bool("per_hub", sc.per_hub);
    if (!(sc.rho_max > 0.0 && sc.rho_max < 1.0)) throw ConfigError("rho_max must be in (0, 1)");
    if (sc.n_probe_realizations < 10) throw ConfigError("probe_realizations must be >= 10");
    return sc;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void center(std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double& x : v) x -= m;
}

// In-place standardization of one column (mean 0, sd 1, n-1).
// Returns false for a zero-variance column.
bool standardize_column(std::vector<double>& v) {
    center(v);
    double ss = 0.0;
    for (double x : v) ss += x * x;
    const double sd = std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
    if (!(sd > 0.0)) return false;
    for (double& x : v) x /= sd;
    return true;
}

// Internal ranking over indices; reports the position taken by
// `probe_idx` (0 if none / not ranked).
struct IndexRanking {
    std::vector<std::pair<std::size_t, double>> order; // (column index, relevance)
    std::vector<std::size_t> dropped;
    int probe_rank = 0;
};

IndexRanking rank_columns(std::vector<std::vector<double>> cols, std::vector<double> target,
                          double drop_tol, std::size_t probe_idx, bool has_probe) {
    IndexRanking out;
    const std::size_t n_rows = target.size();
    const double target_norm0 = std::sqrt(dot(target, target));
    if (!(target_norm0 > 0.0)) throw PipelineError("gram_schmidt_rank: zero-norm target, ranking undefined");

    std::vector<std::size_t> remaining(cols.size());
    std::vector<double> norm0(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        remaining[j] = j;
        norm0[j] = std::sqrt(dot(cols[j], cols[j]));
        if (!(norm0[j] > 0.0)) throw PipelineError("gram_schmidt_rank: zero-norm column at index " +
                                                   std::to_string(j));
    }

    double target_ss = dot(target, target);
    int rank = 0;
    while (!remaining.empty()) {
        if (std::sqrt(target_ss) < drop_tol * target_norm0) break;  // target explained
        if (static_cast<std::size_t>(rank) + 1 >= n_rows) break;    // keep n_rows > n_selected

        // Pick the column with maximal squared cosine to the residual target.
        double best_cos2 = -1.0;
        std::size_t best_pos = 0;
        for (std::size_t p = 0; p < remaining.size(); ++p) {
            const auto& c = cols[remaining[p]];
            const double cn = dot(c, c);
            const double d = dot(c, target);
            const double cos2 = (d * d) / (cn * target_ss);
            if (cos2 > best_cos2) {
                best_cos2 = cos2;
                best_pos = p;
            }
        }
        const std::size_t picked = remaining[best_pos];
        ++rank;
        out.order.emplace_back(picked, std::clamp(best_cos2, 0.0, 1.0));
        if (has_probe && picked == probe_idx) {
            out.probe_rank = rank;
            break; // the probe's rank is all a probe run needs
        }
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));

        // Orthogonalize survivors and the target against the pick.
        const auto& q = cols[picked];
        const double qq = dot(q, q);
        std::vector<std::size_t> kept;
        kept.reserve(remaining.size());
        for (auto j : remaining) {
            auto& c = cols[j];
            const double coef = dot(c, q) / qq;
            for (std::size_t i = 0; i < n_rows; ++i) c[i] -= coef * q[i];
            if (std::sqrt(dot(c, c)) < drop_tol * norm0[j])
                out.dropped.push_back(j); // collinear with the picks so far
            else
                kept.push_back(j);
        }
        remaining = std::move(kept);
        const double tcoef = dot(target, q) / qq;
        for (std::size_t i = 0; i < n_rows; ++i) target[i] -= tcoef * q[i];
        target_ss = dot(target, target);
    }
    return out;
}

} // namespace

RankingResult gram_schmidt_rank(const ColumnSet& x, const std::vector<double>& y, double drop_tol) {
    if (x.cols.size() != x.names.size()) throw ConfigError("gram_schmidt_rank: names/columns mismatch");
    for (const auto& c : x.cols)
        if (c.size() != y.size()) throw ConfigError("gram_schmidt_rank: column/target length mismatch");

    const auto idx = rank_columns(x.cols, y, drop_tol, 0, false);
    RankingResult res;
    for (const auto& [j, rel] : idx.order)
        res.ranked.push_back(RankedFeature{x.names[j], static_cast<int>(res.ranked.size()) + 1, rel});
    for (auto j : idx.dropped) res.dropped.push_back(x.names[j]);
    return res;
}

RiskCurve probe_risk(const ColumnSet& x, const std::vector<double>& y, const SelectionConfig& config) {
    const std::size_t m = x.cols.size();
    const std::size_t n = y.size();
    std::vector<long> rank_hits(m, 0); // rank_hits[k-1] = #realizations with probe rank == k

    long reached = 0;
    for (int r = 0; r < config.n_probe_realizations; ++r) {
        Rng rng(Rng::derive(config.seed, "probe", static_cast<std::uint64_t>(r)));
        std::vector<double> probe(n);
        for (auto& v : probe) v = rng.normal();
        if (!standardize_column(probe)) continue; // astronomically unlikely; treat as unranked

        auto cols = x.cols;
        cols.push_back(std::move(probe));
        const auto idx = rank_columns(std::move(cols), y, 1e-10, m, true);
        if (idx.probe_rank >= 1 && static_cast<std::size_t>(idx.probe_rank) <= m) {
            rank_hits[static_cast<std::size_t>(idx.probe_rank) - 1] += 1;
            ++reached;
        }
    }

    RiskCurve curve;
    curve.rho.resize(m);
    long cum = 0;
    for (std::size_t k = 0; k < m; ++k) {
        cum += rank_hits[k];
        curve.rho[k] = static_cast<double>(cum) / static_cast<double>(config.n_probe_realizations);
    }
    (void)reached;
    return curve;
}

std::vector<std::string> select_features(const std::vector<RankedFeature>& ranking,
                                         const RiskCurve& risk, double rho_max) {
    if (risk.rho.size() < ranking.size())
        throw ConfigError("select_features: risk curve shorter than the ranking");
    std::vector<std::string> out;
    for (const auto& rf : ranking) {
        if (risk.rho[static_cast<std::size_t>(rf.rank) - 1] > rho_max) break;
        out.push_back(rf.name);
    }
    return out;
}

std::vector<double> centered_label_target(const std::vector<int>& labels) {
    std::vector<double> y(labels.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(labels[i]);
    center(y);
    return y;
}

namespace {

HubSelection run_one_group(Hub hub, const FeatureMatrix& matrix,
                           const std::vector<std::string>& names, const SelectionConfig& config,
                           std::uint64_t seed, std::vector<std::string>& warnings) {
    ColumnSet cs;
    for (const auto& name : names) {
        const auto ci = matrix.col_index(name);
        std::vector<double> col(matrix.rows());
        for (std::size_t r = 0; r < matrix.rows(); ++r) col[r] = matrix.at(r, *ci);
        if (!standardize_column(col)) {
            warnings.push_back("selection: constant feature skipped: " + name);
            continue;
        }
        cs.names.push_back(name);
        cs.cols.push_back(std::move(col));
    }

    HubSelection hs;
    hs.hub = hub;
    if (cs.cols.empty()) return hs;

    const auto y = centered_label_target(matrix.labels);
    auto ranking = gram_schmidt_rank(cs, y);
    for (const auto& d : ranking.dropped)
        warnings.push_back("selection: collinear feature dropped: " + d);

    SelectionConfig cfg = config;
    cfg.seed = seed;
    hs.risk = probe_risk(cs, y, cfg);
    hs.ranking = std::move(ranking.ranked);
    hs.selected = select_features(hs.ranking, hs.risk, config.rho_max);
    return hs;
}

} // namespace

SelectionResult select_per_hub(const FeatureMatrix& matrix, const SelectionConfig& config) {
    if (!matrix.complete()) throw InsufficientDataError("select_per_hub requires a complete matrix");
    if (matrix.rows() < 3) throw InsufficientDataError("select_per_hub: too few rows");

    SelectionResult res;
    res.per_hub_mode = config.per_hub;

    if (config.per_hub) {
        if (matrix.hub_of.size() < matrix.cols())
            throw ConfigError("select_per_hub: hubs not assigned (run assign_hubs first)");
        for (Hub hub : {Hub::Substrate, Hub::Ans, Hub::Triggers}) {
            std::vector<std::string> names;
            for (const auto& n : matrix.feature_names)
                if (matrix.hub_of.at(n) == hub) names.push_back(n);
            if (names.empty()) continue;
            auto hs = run_one_group(hub, matrix, names, config,
                                    Rng::derive(config.seed, hub_name(hub)), res.warnings);
            if (hs.selected.empty())
                res.warnings.push_back(std::string("selection: hub ") + hub_name(hub) +
                                       " selected no feature");
            res.hubs.push_back(std::move(hs));
        }
    } else {
        auto hs = run_one_group(Hub::Substrate, matrix, matrix.feature_names, config,
                                Rng::derive(config.seed, "GLOBAL"), res.warnings);
        res.hubs.push_back(std::move(hs));
    }

    for (const auto& hs : res.hubs)
        for (const auto& name : hs.selected) res.selected_union.push_back(name);
    return res;
}

} // namespace holterisk
