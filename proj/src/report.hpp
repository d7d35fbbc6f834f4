#ifndef HOLTERISK_REPORT_HPP
#define HOLTERISK_REPORT_HPP

#include <string>

#include "pipeline.hpp"
#include "selection.hpp"

namespace holterisk {

// All writers create the output directory if needed. Machine-readable
// CSVs never carry a timestamp; the human-readable .txt files get one
// header line unless no_timestamp is set.

std::string selection_summary_text(const SelectionResult& sel);
void write_selection_report(const SelectionResult& sel, const std::string& out_dir, bool no_timestamp);

// Headline table mirroring the paper-style dual presentation: pooled
// overall matrix plus fold mean +- sd for each architecture.
std::string evaluation_headline(const EvaluationReport& rep);
void write_evaluation_report(const EvaluationReport& rep, const std::string& out_dir,
                             bool no_timestamp);

} // namespace holterisk

#endif
