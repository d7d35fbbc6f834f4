#include "types.hpp"

namespace holterisk {

const char* hub_name(Hub h) {
    switch (h) {
    case Hub::Substrate: return "SUBSTRATE";
    case Hub::Ans: return "ANS";
    case Hub::Triggers: return "TRIGGERS";
    }
    return "?";
}

std::optional<Hub> hub_from_name(const std::string& s) {
    if (s == "SUBSTRATE") return Hub::Substrate;
    if (s == "ANS") return Hub::Ans;
    if (s == "TRIGGERS") return Hub::Triggers;
    return std::nullopt;
}

char beat_code(BeatType t) {
    switch (t) {
    case BeatType::Normal: return 'N';
    case BeatType::Pvc: return 'V';
    case BeatType::Pac: return 'A';
    case BeatType::Other: return 'O';
    }
    return '?';
}

std::optional<BeatType> beat_from_code(char c) {
    switch (c) {
    case 'N': return BeatType::Normal;
    case 'V': return BeatType::Pvc;
    case 'A': return BeatType::Pac;
    case 'O': return BeatType::Other;
    default: return std::nullopt;
    }
}

} // namespace holterisk
