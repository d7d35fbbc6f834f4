#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "csvutil.hpp"

namespace holterisk {

namespace {

std::string timestamp_line() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[40];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string("# generated ") + buf + "\n";
}

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string opt_pct(const std::optional<double>& v) { return v ? pct(*v) : std::string("undefined"); }

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw FormatError("cannot write " + p.string());
    return out;
}

void write_selection_csv(const SelectionResult& sel, std::ostream& out, const std::string& scope) {
    for (const auto& hs : sel.hubs) {
        const std::string hub = sel.per_hub_mode ? hub_name(hs.hub) : "GLOBAL";
        for (const auto& rf : hs.ranking) {
            const bool selected =
                std::find(hs.selected.begin(), hs.selected.end(), rf.name) != hs.selected.end();
            out << scope << "," << hub << "," << rf.rank << "," << rf.name << ","
                << format_double(rf.relevance) << ","
                << format_double(hs.risk.rho[static_cast<std::size_t>(rf.rank) - 1]) << ","
                << (selected ? 1 : 0) << "\n";
        }
    }
}

} // namespace

std::string selection_summary_text(const SelectionResult& sel) {
    std::string s;
    s += "feature selection (";
    s += sel.per_hub_mode ? "per hub" : "global";
    s += ", random probe)\n";
    for (const auto& hs : sel.hubs) {
        const std::string hub = sel.per_hub_mode ? hub_name(hs.hub) : "GLOBAL";
        s += "  " + hub + ": " + std::to_string(hs.selected.size()) + " of " +
             std::to_string(hs.ranking.size()) + " ranked feature(s) selected\n";
        for (const auto& rf : hs.ranking) {
            const bool selected =
                std::find(hs.selected.begin(), hs.selected.end(), rf.name) != hs.selected.end();
            s += "    " + std::to_string(rf.rank) + ". " + rf.name +
                 "  relevance=" + pct(100.0 * rf.relevance) + "%" +
                 "  rho=" + pct(100.0 * hs.risk.rho[static_cast<std::size_t>(rf.rank) - 1]) + "%" +
                 (selected ? "  [selected]" : "") + "\n";
        }
    }
    s += "selected set (" + std::to_string(sel.selected_union.size()) + "):";
    for (const auto& f : sel.selected_union) s += " " + f;
    s += "\n";
    for (const auto& w : sel.warnings) s += "warning: " + w + "\n";
    return s;
}

void write_selection_report(const SelectionResult& sel, const std::string& out_dir, bool no_timestamp) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    {
        auto out = open_out(dir / "selection.csv");
        out << "scope,hub,rank,feature,relevance,rho,selected\n";
        write_selection_csv(sel, out, "global");
    }
    {
        auto out = open_out(dir / "selection.txt");
        if (!no_timestamp) out << timestamp_line();
        out << selection_summary_text(sel);
    }
}

namespace {

void headline_block(std::string& s, const ArchitectureResult& ar) {
    const auto& ct = ar.ct;
    s += ar.name + "\n";
    s += "  overall (pooled) confusion matrix [tn fp / fn tp]: " + std::to_string(ct.pooled.tn) + " " +
         std::to_string(ct.pooled.fp) + " / " + std::to_string(ct.pooled.fn) + " " +
         std::to_string(ct.pooled.tp) + "\n";
    s += "  overall (pooled): NPV " + opt_pct(ct.pooled_metrics.npv) + "%  PPV " +
         opt_pct(ct.pooled_metrics.ppv) + "%  implant reduction " +
         pct(ct.pooled_metrics.implant_reduction) + "%\n";
    s += "  mean +- std (per-fold): NPV " + pct(ct.npv.mean) + " +- " + pct(ct.npv.sd) + "% (" +
         std::to_string(ct.npv.n_folds) + " folds)  PPV " + pct(ct.ppv.mean) + " +- " +
         pct(ct.ppv.sd) + "% (" + std::to_string(ct.ppv.n_folds) + " folds)\n";
    s += "  implant reduction " + pct(ct.reduction.mean) + " +- " + pct(ct.reduction.sd) +
         "%  correctly classified " + pct(ct.correct.mean) + " +- " + pct(ct.correct.sd) +
         " per fold\n";
}

} // namespace

std::string evaluation_headline(const EvaluationReport& rep) {
    std::string s;
    headline_block(s, rep.conventional);
    headline_block(s, rep.adhoc);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", rep.p_value);
    s += "conventional vs ad hoc (paired sign-flip on per-fold correct counts): p-value = ";
    s += buf;
    s += "\n";
    return s;
}

void write_evaluation_report(const EvaluationReport& rep, const std::string& out_dir,
                             bool no_timestamp) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    {
        auto out = open_out(dir / "per_fold_metrics.csv");
        out << "architecture,fold,tn,fp,fn,tp,npv,ppv,implant_reduction,correct,total\n";
        for (const ArchitectureResult* ar : {&rep.conventional, &rep.adhoc}) {
            for (const auto& fe : ar->ct.folds) {
                out << ar->name << "," << fe.fold << "," << fe.cm.tn << "," << fe.cm.fp << ","
                    << fe.cm.fn << "," << fe.cm.tp << ","
                    << (fe.m.npv ? format_double(*fe.m.npv) : "") << ","
                    << (fe.m.ppv ? format_double(*fe.m.ppv) : "") << ","
                    << format_double(fe.m.implant_reduction) << "," << fe.m.correctly_classified
                    << "," << fe.m.total << "\n";
            }
        }
    }
    {
        auto out = open_out(dir / "overall_matrix.csv");
        out << "architecture,tn,fp,fn,tp,npv,ppv,implant_reduction,correct,total\n";
        for (const ArchitectureResult* ar : {&rep.conventional, &rep.adhoc}) {
            const auto& cm = ar->ct.pooled;
            const auto& m = ar->ct.pooled_metrics;
            out << ar->name << "," << cm.tn << "," << cm.fp << "," << cm.fn << "," << cm.tp << ","
                << (m.npv ? format_double(*m.npv) : "") << ","
                << (m.ppv ? format_double(*m.ppv) : "") << ","
                << format_double(m.implant_reduction) << "," << m.correctly_classified << ","
                << m.total << "\n";
        }
    }
    {
        auto out = open_out(dir / "summary.csv");
        out << "architecture,metric,mean,std,n_folds\n";
        for (const ArchitectureResult* ar : {&rep.conventional, &rep.adhoc}) {
            auto line = [&](const char* name, const MetricSummary& ms) {
                out << ar->name << "," << name << "," << format_double(ms.mean) << ","
                    << format_double(ms.sd) << "," << ms.n_folds << "\n";
            };
            line("npv", ar->ct.npv);
            line("ppv", ar->ct.ppv);
            line("implant_reduction", ar->ct.reduction);
            line("correctly_classified", ar->ct.correct);
        }
    }
    {
        auto out = open_out(dir / "selection.csv");
        out << "scope,hub,rank,feature,relevance,rho,selected\n";
        if (rep.global_selection) {
            write_selection_csv(*rep.global_selection, out, "global");
        } else {
            // Per-fold selections are identical across architectures
            // (shared folds and seeds); report the conventional run's.
            for (const auto& fi : rep.conventional.fold_info) {
                for (const auto& [hub, feats] : fi.selected_per_hub) {
                    int rank = 1;
                    for (const auto& f : feats)
                        out << "fold-" << fi.fold << "," << hub << "," << rank++ << "," << f
                            << ",,,1\n";
                }
            }
        }
    }
    {
        auto out = open_out(dir / "complexity.csv");
        out << "architecture,fold,scope,n_hidden,lambda,cv_score\n";
        for (const ArchitectureResult* ar : {&rep.conventional, &rep.adhoc}) {
            for (const auto& fi : ar->fold_info)
                for (const auto& cc : fi.complexity)
                    out << ar->name << "," << fi.fold << "," << cc.scope << "," << cc.n_hidden << ","
                        << format_double(cc.lambda) << "," << format_double(cc.cv_score) << "\n";
        }
    }
    {
        auto out = open_out(dir / "comparison.csv");
        out << "test,p_value\n";
        out << "paired_sign_flip_correct_counts," << format_double(rep.p_value) << "\n";
    }
    {
        auto out = open_out(dir / "report.txt");
        if (!no_timestamp) out << timestamp_line();
        out << "cross-test evaluation report\n";
        out << "============================\n\n";
        out << evaluation_headline(rep);
        out << "\nconfiguration\n";
        for (const auto& [k, v] : rep.config_echo) out << "  " << k << " = " << v << "\n";
        if (rep.global_selection) {
            out << "\nglobal selection\n";
            out << selection_summary_text(*rep.global_selection);
        }
        if (!rep.warnings.empty()) {
            out << "\nwarnings\n";
            for (const auto& w : rep.warnings) out << "  " << w << "\n";
        }
        out << "\nfiles: per_fold_metrics.csv overall_matrix.csv summary.csv selection.csv "
               "complexity.csv comparison.csv\n";
    }
}

} // namespace holterisk
