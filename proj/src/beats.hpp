#ifndef HOLTERISK_BEATS_HPP
#define HOLTERISK_BEATS_HPP

#include <string>

#include "types.hpp"

namespace holterisk {

// beat-CSV: optional header `# duration_ms=<int>`, then `time_ms,type`
// rows with type in {N,V,A,O}. Times must be strictly increasing; an
// out-of-order file is rejected, never silently sorted.
BeatSeries load_beat_series(const std::string& path);
BeatSeries parse_beat_series(const std::string& text, const std::string& origin);

void write_beat_series(const BeatSeries& series, const std::string& path);

} // namespace holterisk

#endif
