#include "cohort.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "csvutil.hpp"

namespace holterisk {

Cohort load_cohort(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open cohort file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cohort(ss.str(), path);
}

Cohort parse_cohort(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(origin + ": empty file");

    const auto header = split_csv_line(line);
    if (header.size() < 2 || trim(header[0]) != "patient_id" || trim(header[1]) != "label")
        throw FormatError(origin + ": header must start with `patient_id,label`");

    Cohort cohort;
    auto& m = cohort.matrix;
    for (std::size_t i = 2; i < header.size(); ++i) {
        const std::string name = trim(header[i]);
        if (name.empty()) throw FormatError(origin + ": empty feature name in header");
        if (m.col_index(name)) throw FormatError(origin + ": duplicate feature name: " + name);
        m.feature_names.push_back(name);
    }

    std::unordered_set<std::string> seen_ids;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw FormatError(origin + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
        const std::string id = trim(cells[0]);
        if (id.empty()) throw FormatError(origin + ":" + std::to_string(lineno) + ": empty patient_id");
        if (!seen_ids.insert(id).second)
            throw FormatError(origin + ":" + std::to_string(lineno) + ": duplicate patient_id: " + id);

        const std::string label_cell = trim(cells[1]);
        int label;
        if (label_cell == "0")
            label = 0;
        else if (label_cell == "1")
            label = 1;
        else
            throw FormatError(origin + ":" + std::to_string(lineno) + ": label must be 0 or 1, got `" +
                              label_cell + "`");

        PatientRecord rec;
        rec.id = id;
        rec.label = label;

        m.patient_ids.push_back(id);
        m.labels.push_back(label);
        for (std::size_t c = 2; c < cells.size(); ++c) {
            const std::string cell = trim(cells[c]);
            const std::string& fname = m.feature_names[c - 2];
            if (cell.empty() || cell == "NA") {
                m.values.push_back(0.0);
                m.missing.push_back(1);
                rec.features[fname] = std::nullopt;
                continue;
            }
            auto v = parse_double(cell);
            if (!v) {
                cohort.warnings.push_back(origin + ":" + std::to_string(lineno) + ": unparseable value `" +
                                          cell + "` for " + fname + " treated as missing");
                m.values.push_back(0.0);
                m.missing.push_back(1);
                rec.features[fname] = std::nullopt;
                continue;
            }
            m.values.push_back(*v);
            m.missing.push_back(0);
            rec.features[fname] = *v;
        }
        cohort.records.push_back(std::move(rec));
    }
    return cohort;
}

void write_cohort(const FeatureMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write cohort file: " + path);
    out << "patient_id,label";
    for (const auto& name : matrix.feature_names) {
        if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos)
            throw FormatError("feature name not representable in CSV: " + name);
        out << "," << name;
    }
    out << "\n";
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const auto& id = matrix.patient_ids[r];
        if (id.find(',') != std::string::npos || id.find('\n') != std::string::npos)
            throw FormatError("patient_id not representable in CSV: " + id);
        out << id << "," << matrix.labels[r];
        for (std::size_t c = 0; c < matrix.cols(); ++c) {
            out << ",";
            if (!matrix.is_missing(r, c)) out << format_double(matrix.at(r, c));
        }
        out << "\n";
    }
    if (!out) throw FormatError("write failed: " + path);
}

FeatureMatrix filter_complete(const FeatureMatrix& matrix, const std::set<std::string>& required) {
    std::vector<std::size_t> req_cols;
    for (const auto& name : required) {
        auto idx = matrix.col_index(name);
        if (!idx) throw ConfigError("filter_complete: unknown feature: " + name);
        req_cols.push_back(*idx);
    }

    FeatureMatrix out;
    out.feature_names = matrix.feature_names;
    out.hub_of = matrix.hub_of;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        bool ok = true;
        for (auto c : req_cols)
            if (matrix.is_missing(r, c)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        out.patient_ids.push_back(matrix.patient_ids[r]);
        out.labels.push_back(matrix.labels[r]);
        for (std::size_t c = 0; c < matrix.cols(); ++c) {
            out.values.push_back(matrix.at(r, c));
            out.missing.push_back(matrix.is_missing(r, c) ? 1 : 0);
        }
    }
    if (out.rows() == 0)
        throw InsufficientDataError("filter_complete: no patient has all required features");
    return out;
}

ScalingParams fit_scaling(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows) {
    std::vector<std::size_t> idx = rows;
    if (idx.empty()) {
        idx.resize(matrix.rows());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    }
    if (idx.size() < 2) throw InsufficientDataError("fit_scaling: need at least 2 rows");

    ScalingParams p;
    p.feature_names = matrix.feature_names;
    p.mean.resize(matrix.cols());
    p.sd.resize(matrix.cols());
    const double n = static_cast<double>(idx.size());
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
        double sum = 0.0;
        for (auto r : idx) {
            if (matrix.is_missing(r, c))
                throw InsufficientDataError("fit_scaling: missing value in column " + matrix.feature_names[c]);
            sum += matrix.at(r, c);
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (auto r : idx) {
            const double d = matrix.at(r, c) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / (n - 1.0)); // unbiased convention, fixed project-wide
        if (!(sd > 0.0))
            throw PipelineError("zero-variance feature cannot be standardized: " + matrix.feature_names[c]);
        p.mean[c] = mean;
        p.sd[c] = sd;
    }
    return p;
}

FeatureMatrix apply_scaling(const FeatureMatrix& matrix, const ScalingParams& params) {
    if (params.feature_names != matrix.feature_names)
        throw ConfigError("apply_scaling: scaling params fitted on a different column set");
    FeatureMatrix out = matrix;
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c)
            if (!out.is_missing(r, c)) out.at(r, c) = (out.at(r, c) - params.mean[c]) / params.sd[c];
    return out;
}

FeatureMatrix invert_scaling(const FeatureMatrix& matrix, const ScalingParams& params) {
    if (params.feature_names != matrix.feature_names)
        throw ConfigError("invert_scaling: scaling params fitted on a different column set");
    FeatureMatrix out = matrix;
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c)
            if (!out.is_missing(r, c)) out.at(r, c) = out.at(r, c) * params.sd[c] + params.mean[c];
    return out;
}

StandardizeResult standardize(const FeatureMatrix& matrix) {
    if (!matrix.complete())
        throw InsufficientDataError("standardize requires a complete matrix (run filter_complete first)");
    StandardizeResult res;
    res.params = fit_scaling(matrix);
    res.matrix = apply_scaling(matrix, res.params);
    return res;
}

HubAssignResult assign_hubs(const FeatureMatrix& matrix, const std::map<std::string, Hub>& mapping) {
    std::vector<std::string> unmapped;
    for (const auto& name : matrix.feature_names)
        if (mapping.find(name) == mapping.end()) unmapped.push_back(name);
    if (!unmapped.empty()) {
        std::string msg = "assign_hubs: features without a hub:";
        for (const auto& n : unmapped) msg += " " + n;
        throw ConfigError(msg);
    }

    HubAssignResult res;
    res.matrix = matrix;
    res.matrix.hub_of.clear();
    for (const auto& name : matrix.feature_names) res.matrix.hub_of[name] = mapping.at(name);
    for (const auto& [name, hub] : mapping)
        if (!matrix.col_index(name))
            res.warnings.push_back("hub map entry ignored (no such feature): " + name);
    return res;
}

std::map<std::string, Hub> load_hub_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open hub map: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_hub_map(ss.str(), path);
}

std::map<std::string, Hub> parse_hub_map(const std::string& text, const std::string& origin) {
    std::map<std::string, Hub> mapping;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw FormatError(origin + ":" + std::to_string(lineno) + ": expected `feature = HUB`");
        const std::string name = trim(t.substr(0, eq));
        const std::string hub_str = trim(t.substr(eq + 1));
        auto hub = hub_from_name(hub_str);
        if (name.empty() || !hub)
            throw FormatError(origin + ":" + std::to_string(lineno) +
                              ": hub must be SUBSTRATE, ANS or TRIGGERS, got `" + hub_str + "`");
        mapping[name] = *hub;
    }
    return mapping;
}

void write_hub_map(const std::map<std::string, Hub>& mapping, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write hub map: " + path);
    for (const auto& [name, hub] : mapping) out << name << " = " << hub_name(hub) << "\n";
    if (!out) throw FormatError("write failed: " + path);
}

} // namespace holterisk
