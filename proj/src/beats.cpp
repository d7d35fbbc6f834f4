#include "beats.hpp"

#include <fstream>
#include <sstream>

#include "csvutil.hpp"

namespace holterisk {

BeatSeries load_beat_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open beat file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_beat_series(ss.str(), path);
}

BeatSeries parse_beat_series(const std::string& text, const std::string& origin) {
    auto fail = [&](int lineno, const std::string& msg) -> FormatError {
        return FormatError(origin + ":" + std::to_string(lineno) + ": " + msg);
    };

    BeatSeries series;
    bool have_duration = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const std::string key = "duration_ms=";
            const auto pos = t.find(key);
            if (pos != std::string::npos) {
                auto v = parse_double(trim(t.substr(pos + key.size())));
                if (!v || *v <= 0.0) throw fail(lineno, "bad duration_ms header");
                series.duration_ms = *v;
                have_duration = true;
            }
            continue;
        }
        const auto cells = split_csv_line(t);
        if (cells.size() != 2) throw fail(lineno, "expected `time_ms,type`");
        auto time = parse_double(trim(cells[0]));
        if (!time) throw fail(lineno, "bad beat time: " + cells[0]);
        const std::string code = trim(cells[1]);
        if (code.size() != 1) throw fail(lineno, "unknown beat type code: " + cells[1]);
        auto type = beat_from_code(code[0]);
        if (!type) throw fail(lineno, "unknown beat type code: " + code);
        if (!series.beats.empty() && *time <= series.beats.back().time_ms)
            throw fail(lineno, "beat times must be strictly increasing (" +
                                   format_double(*time) + " after " +
                                   format_double(series.beats.back().time_ms) + ")");
        series.beats.push_back(Beat{*time, *type});
    }
    if (series.beats.empty()) throw FormatError(origin + ": no beats");
    if (!have_duration) series.duration_ms = series.beats.back().time_ms;
    if (series.duration_ms <= 0.0) throw FormatError(origin + ": duration must be positive");
    if (series.beats.back().time_ms > series.duration_ms)
        throw FormatError(origin + ": beat time past declared duration");
    return series;
}

void write_beat_series(const BeatSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write beat file: " + path);
    out << "# duration_ms=" << format_double(series.duration_ms) << "\n";
    for (const auto& b : series.beats)
        out << format_double(b.time_ms) << "," << beat_code(b.type) << "\n";
    if (!out) throw FormatError("write failed: " + path);
}

} // namespace holterisk
