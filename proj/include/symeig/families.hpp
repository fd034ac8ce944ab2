#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "symeig/model.hpp"

namespace symeig {

// Reference truss families. All use E = 100 MPa and rho = 0.5 g/cm^3.
//
//   dome(N)      1 apex + N ring nodes + N supports, 4N elements
//   tetrahedral  4 free vertices + 4 supports, 10 elements
//   octahedral   6 free vertices + 6 supports, 18 elements
//   dodecahedral 20 free vertices + 20 supports, 50 elements
//   icosahedral  12 free vertices + 12 supports, 42 elements
//
// Generators produce the geometry with every element in a single placeholder
// group; apply_preset assigns the named design partition.
TrussModel make_dome(int n);
TrussModel make_tetrahedral();
TrussModel make_octahedral();
TrussModel make_dodecahedral();
TrussModel make_icosahedral();

// Moves the dome apex by delta (m). Errors if the model has no unique apex.
TrussModel perturb_apex(const TrussModel& dome, const Eigen::Vector3d& delta);

struct PresetInfo {
    std::string name;        // e.g. "dodeca-accidental"
    std::string family;      // dome|tetrahedral|octahedral|dodecahedral|icosahedral
    int dome_sections = 0;   // N for domes
    std::string enforced;    // group spec of the enforced symmetry ("c1" if none)
    std::string file;        // model file name within a preset directory
    std::string description;
};

const std::vector<PresetInfo>& preset_registry();
const PresetInfo& preset_info(const std::string& name);

// Builds the named preset model (generator + design partition).
TrussModel preset_model(const std::string& name);

// Applies a per-family preset id ("nosym", "cnv", "td", ...) to a freshly
// generated model of that family.
TrussModel apply_preset(const TrussModel& model, const std::string& family, const std::string& preset_id);

// The apex perturbation used by the perturbed dome presets.
Eigen::Vector3d dome_apex_perturbation();

}  // namespace symeig
