#pragma once

// Standalone SVG plots. The CSV files are the normative output; these are for
// looking at.

#include <string>
#include <vector>

#include "epfano/reduction.hpp"
#include "epfano/scattering.hpp"

namespace epfano {

/// Two stacked panels over energy: |T22|^2 on top, the interference term below.
std::string cross_section_svg(const std::vector<CrossSectionSample>& samples, const std::string& title);

/// Both branches in the complex plane, full problem solid and reduced model
/// dashed, with the f_min end marked.
std::string trajectory_svg(const Trajectory& full, const Trajectory& reduced, const std::string& title);

}  // namespace epfano
