#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "symeig/model.hpp"

namespace symeig {

// Finite group of orthogonal 3x3 matrices, generated by closure.
struct PointGroup {
    std::string name;
    std::vector<Eigen::Matrix3d> matrices;

    int order() const { return static_cast<int>(matrices.size()); }
};

// Named constructions. C_Nv is taken about the z axis with the first mirror
// plane rotated by mirror_offset radians from the xz plane.
PointGroup make_cnv(int n, double mirror_offset = 0.0);
PointGroup make_td();
PointGroup make_oh();

// The icosahedral group in the two orientations this library's polyhedra use:
// "icosahedral" preserves the vertex family (0,+-1,+-psi) and cyclic shifts;
// "dodecahedral" preserves (+-1,+-1,+-1) united with cyclic (0,+-1/psi,+-psi).
enum class IhOrientation { icosahedral, dodecahedral };
PointGroup make_ih(IhOrientation orientation = IhOrientation::icosahedral);

// Parses a group spec string: "c1", "cNv", "cNv@<deg>" (mirror offset in
// degrees), "c3v@tetra" (axis through a tetrahedron vertex), "c5v@dodeca"
// (axis through a dodecahedron face), "td", "oh", "ih", "ih@dodeca".
PointGroup make_group(const std::string& spec);

inline constexpr double kGeometryMatchTol = 1e-8;

struct OrbitPartition {
    std::vector<std::vector<int>> node_orbits;     // node ids
    std::vector<std::vector<int>> element_orbits;  // element ids
};

// Orbits of nodes and elements under the group action. Throws
// std::invalid_argument if some group element maps a node (or an element)
// onto nothing in the model.
OrbitPartition orbits(const TrussModel& model, const PointGroup& group, double tol = kGeometryMatchTol);

struct SymmetryCheck {
    bool geometric = false;  // every matrix permutes nodes and elements
    bool design = false;     // geometric, and permuted elements share areas
};

SymmetryCheck check_symmetry(const TrussModel& model, const PointGroup& group,
                             double tol = kGeometryMatchTol);

struct AccidentalReport {
    std::string enforced;
    int enforced_order = 1;
    std::string detected;
    int detected_order = 1;
    bool accidental = false;  // detected group strictly contains the enforced one
};

// Scans the named families (I_h in both orientations, O_h, T_d, C_Nv for
// N = 8..3 about z with both mirror conventions, plus the enforced group) and
// reports the largest one under which the design is symmetric.
AccidentalReport detect_accidental(const TrussModel& model, const std::string& enforced_spec,
                                   double tol = kGeometryMatchTol);

}  // namespace symeig
