#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slick/diagnostics.hpp"
#include "slick/state.hpp"

namespace slick {

// Flat binary container: 8-byte magic, u32 header length, JSON header, then
// named little-endian f64 arrays (complex fields interleave re/im).
struct StateDump {
    FlowState state;
    std::optional<FlowState> prev;      // one-step history (temporal diagnostics)
    std::optional<FlowState> prevprev;  // two-step history
    double c0 = 0.0;
    double mass0 = 0.0;
    long step = 0;
    std::vector<BudgetSample> tail;     // last emitted samples (residual continuity)
};

void save_state(const std::string& path, const StateDump& dump);
StateDump load_state(const std::string& path);

// Physical-domain mesh of the flattening map and pushed-forward velocity,
// one CSV row per grid node: x1, x2, x3, u1, u2, u3.
void export_theta(const std::string& path, const FlowState& state);

std::string format_g17(double v);  // shortest round-trip-stable decimal, 17 sig digits

}  // namespace slick
