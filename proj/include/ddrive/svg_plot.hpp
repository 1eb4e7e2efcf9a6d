#pragma once

#include <span>
#include <string>
#include <vector>

#include "ddrive/pso_planner.hpp"
#include "ddrive/sim_harness.hpp"
#include "ddrive/workspace.hpp"

namespace ddrive {

// First-party SVG emitters; no plotting dependency. All outputs are
// standalone valid XML documents.

// Field map: bounds, obstacles (black), start (yellow square), target (green
// square), optional path polyline (blue) and control points (red).
std::string workspace_svg(const Workspace& ws, const SampledPath* path = nullptr,
                          const ControlPolygon* polygon = nullptr);

// Reference vs actual trajectory overlay on the field map.
std::string overlay_svg(const Workspace& ws, const SimResult& result);

// Wheel duty cycles (signed by direction) against time.
std::string duty_svg(const SimResult& result);

// Per-run lengths with the aggregate statistics in the caption.
std::string mc_summary_svg(const McReport& report);

// Success rate and mean length bars per penalty coefficient.
std::string sweep_svg(const std::vector<BetaReport>& reports);

}  // namespace ddrive
