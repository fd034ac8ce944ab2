#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace symeig {

// Working units throughout the library: lengths in m, cross-sectional areas
// in mm^2, Young's modulus in MPa, mass density in g/cm^3. All arithmetic is
// done on the raw numeric values in these units; eigenvalues come out in the
// same convention the reference tables use.
struct Material {
    double youngs_modulus = 0.0;  // MPa
    double mass_density = 0.0;    // g/cm^3
};

struct Node {
    int id = -1;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();  // m
    std::array<bool, 3> fixed{false, false, false};

    bool pinned() const { return fixed[0] && fixed[1] && fixed[2]; }
    bool free() const { return !fixed[0] && !fixed[1] && !fixed[2]; }
};

struct Element {
    int id = -1;
    std::array<int, 2> nodes{-1, -1};  // node ids, order irrelevant
    int group = -1;                    // design group id
};

// One symmetric design variable: a set of elements sharing a single area.
// Membership is stored on the elements (Element::group); the groups list
// fixes the variable ordering used by sensitivity reports.
struct DesignGroup {
    int id = -1;
    std::string label;
    double area = 0.0;  // mm^2
};

class TrussModel {
  public:
    Material material;
    std::vector<Node> nodes;
    std::vector<Element> elements;
    std::vector<DesignGroup> groups;

    // Index lookups (position in the vectors, not ids). Throw on unknown id.
    int node_index(int node_id) const;
    int element_index(int element_id) const;
    int group_index(int group_id) const;

    const Node& node(int node_id) const { return nodes[static_cast<size_t>(node_index(node_id))]; }
    const Element& element(int element_id) const {
        return elements[static_cast<size_t>(element_index(element_id))];
    }

    double area_of(const Element& e) const;
    std::vector<int> elements_in_group(int group_id) const;  // element ids
    int free_node_count() const;

    // Checks ids, connectivity, positive areas, positive element lengths and
    // the presence of at least one free degree of freedom. Throws
    // std::invalid_argument with a description of the first violation.
    void validate() const;
};

struct AssembledSystem {
    Eigen::MatrixXd stiffness;  // n_f x n_f, symmetric
    Eigen::MatrixXd mass;       // n_f x n_f, symmetric
    // dof_map[3*node_pos + axis] = free dof index, or -1 for a fixed dof.
    // Node positions follow ascending node id.
    std::vector<int> dof_map;
    int free_dofs = 0;
};

double element_length(const TrussModel& model, int element_id);

// Local 2x2 axial stiffness (x E / L) [[1,-1],[-1,1]] and consistent axial
// mass (rho x L / 6) [[2,1],[1,2]]. Inputs must be positive.
Eigen::Matrix2d local_stiffness(double area, double youngs_modulus, double length);
Eigen::Matrix2d local_mass(double area, double mass_density, double length);

// 2x6 local-to-global transformation holding the element direction cosines.
// The unit vector points from the lower node id to the higher one.
Eigen::Matrix<double, 2, 6> transformation(const TrussModel& model, int element_id);

AssembledSystem assemble(const TrussModel& model);

// JSON model file round trip. The schema is
//   {"material":{"E":..,"rho":..},
//    "nodes":[{"id":..,"xyz":[..],"fixed":[..]}],
//    "elements":[{"id":..,"n":[i,j],"group":..}],
//    "groups":[{"id":..,"label":..,"area":..}]}
TrussModel load_model(std::istream& in);
TrussModel load_model_file(const std::string& path);
void save_model(const TrussModel& model, std::ostream& out);
void save_model_file(const TrussModel& model, const std::string& path);

}  // namespace symeig
