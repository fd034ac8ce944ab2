#include "symeig/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace symeig {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

int TrussModel::node_index(int node_id) const {
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == node_id) return static_cast<int>(i);
    }
    fail("unknown node id " + std::to_string(node_id));
}

int TrussModel::element_index(int element_id) const {
    for (size_t i = 0; i < elements.size(); ++i) {
        if (elements[i].id == element_id) return static_cast<int>(i);
    }
    fail("unknown element id " + std::to_string(element_id));
}

int TrussModel::group_index(int group_id) const {
    for (size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].id == group_id) return static_cast<int>(i);
    }
    fail("unknown group id " + std::to_string(group_id));
}

double TrussModel::area_of(const Element& e) const {
    return groups[static_cast<size_t>(group_index(e.group))].area;
}

std::vector<int> TrussModel::elements_in_group(int group_id) const {
    std::vector<int> out;
    for (const Element& e : elements) {
        if (e.group == group_id) out.push_back(e.id);
    }
    return out;
}

int TrussModel::free_node_count() const {
    int n = 0;
    for (const Node& nd : nodes) {
        if (nd.free()) ++n;
    }
    return n;
}

void TrussModel::validate() const {
    if (material.youngs_modulus <= 0.0) fail("Young's modulus must be positive");
    if (material.mass_density <= 0.0) fail("mass density must be positive");
    if (nodes.empty()) fail("model has no nodes");
    if (elements.empty()) fail("model has no elements");

    std::set<int> node_ids;
    for (const Node& n : nodes) {
        if (!node_ids.insert(n.id).second) fail("duplicate node id " + std::to_string(n.id));
        // A support is a full pin: either all axes fixed or none.
        if (!n.pinned() && !n.free()) {
            fail("node " + std::to_string(n.id) + " has a partial support; only full pins are supported");
        }
    }

    std::set<int> group_ids;
    for (const DesignGroup& g : groups) {
        if (!group_ids.insert(g.id).second) fail("duplicate group id " + std::to_string(g.id));
        if (g.area <= 0.0) fail("group " + std::to_string(g.id) + " has non-positive area");
    }

    std::set<int> element_ids;
    for (const Element& e : elements) {
        if (!element_ids.insert(e.id).second) fail("duplicate element id " + std::to_string(e.id));
        if (e.nodes[0] == e.nodes[1]) fail("element " + std::to_string(e.id) + " joins a node to itself");
        if (node_ids.count(e.nodes[0]) == 0 || node_ids.count(e.nodes[1]) == 0) {
            fail("element " + std::to_string(e.id) + " references a missing node");
        }
        if (group_ids.count(e.group) == 0) {
            fail("element " + std::to_string(e.id) + " references missing group " + std::to_string(e.group));
        }
        if (element_length(*this, e.id) <= 0.0) {
            fail("element " + std::to_string(e.id) + " has zero length");
        }
    }

    if (free_node_count() == 0) fail("model has no free degrees of freedom");
}

double element_length(const TrussModel& model, int element_id) {
    const Element& e = model.element(element_id);
    const Eigen::Vector3d a = model.node(e.nodes[0]).position;
    const Eigen::Vector3d b = model.node(e.nodes[1]).position;
    return (b - a).norm();
}

Eigen::Matrix2d local_stiffness(double area, double youngs_modulus, double length) {
    if (area <= 0.0 || youngs_modulus <= 0.0 || length <= 0.0) {
        fail("local_stiffness requires positive area, modulus and length");
    }
    const double k = area * youngs_modulus / length;
    Eigen::Matrix2d m;
    m << k, -k, -k, k;
    return m;
}

Eigen::Matrix2d local_mass(double area, double mass_density, double length) {
    if (area <= 0.0 || mass_density <= 0.0 || length <= 0.0) {
        fail("local_mass requires positive area, density and length");
    }
    const double c = mass_density * area * length / 6.0;
    Eigen::Matrix2d m;
    m << 2.0 * c, c, c, 2.0 * c;
    return m;
}

Eigen::Matrix<double, 2, 6> transformation(const TrussModel& model, int element_id) {
    const Element& e = model.element(element_id);
    const int lo = std::min(e.nodes[0], e.nodes[1]);
    const int hi = std::max(e.nodes[0], e.nodes[1]);
    const Eigen::Vector3d d = model.node(hi).position - model.node(lo).position;
    const double length = d.norm();
    if (length <= 0.0) fail("element " + std::to_string(element_id) + " has coincident endpoints");
    const Eigen::Vector3d tau = d / length;
    Eigen::Matrix<double, 2, 6> t = Eigen::Matrix<double, 2, 6>::Zero();
    t.block<1, 3>(0, 0) = tau.transpose();
    t.block<1, 3>(1, 3) = tau.transpose();
    return t;
}

AssembledSystem assemble(const TrussModel& model) {
    model.validate();

    // Free dofs in (node id ascending, axis) order.
    std::vector<int> order(model.nodes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return model.nodes[size_t(a)].id < model.nodes[size_t(b)].id; });

    std::unordered_map<int, int> node_pos;  // node id -> position in sorted order
    AssembledSystem sys;
    sys.dof_map.assign(3 * model.nodes.size(), -1);
    int next = 0;
    for (size_t p = 0; p < order.size(); ++p) {
        const Node& n = model.nodes[size_t(order[p])];
        node_pos[n.id] = static_cast<int>(p);
        for (int axis = 0; axis < 3; ++axis) {
            if (!n.fixed[size_t(axis)]) sys.dof_map[3 * p + size_t(axis)] = next++;
        }
    }
    sys.free_dofs = next;
    if (next == 0) fail("model has no free degrees of freedom");

    sys.stiffness = Eigen::MatrixXd::Zero(next, next);
    sys.mass = Eigen::MatrixXd::Zero(next, next);

    for (const Element& e : model.elements) {
        const double length = element_length(model, e.id);
        const double area = model.area_of(e);
        const Eigen::Matrix2d kbar = local_stiffness(area, model.material.youngs_modulus, length);
        const Eigen::Matrix2d mbar = local_mass(area, model.material.mass_density, length);
        const Eigen::Matrix<double, 2, 6> t = transformation(model, e.id);
        const Eigen::Matrix<double, 6, 6> ke = t.transpose() * kbar * t;
        const Eigen::Matrix<double, 6, 6> me = t.transpose() * mbar * t;

        const int lo = std::min(e.nodes[0], e.nodes[1]);
        const int hi = std::max(e.nodes[0], e.nodes[1]);
        std::array<int, 6> dofs;
        for (int axis = 0; axis < 3; ++axis) {
            dofs[size_t(axis)] = sys.dof_map[size_t(3 * node_pos.at(lo) + axis)];
            dofs[size_t(3 + axis)] = sys.dof_map[size_t(3 * node_pos.at(hi) + axis)];
        }
        for (int a = 0; a < 6; ++a) {
            if (dofs[size_t(a)] < 0) continue;
            for (int b = 0; b < 6; ++b) {
                if (dofs[size_t(b)] < 0) continue;
                sys.stiffness(dofs[size_t(a)], dofs[size_t(b)]) += ke(a, b);
                sys.mass(dofs[size_t(a)], dofs[size_t(b)]) += me(a, b);
            }
        }
    }
    return sys;
}

namespace {

using nlohmann::json;

json model_to_json(const TrussModel& m) {
    json j;
    j["material"] = {{"E", m.material.youngs_modulus}, {"rho", m.material.mass_density}};
    j["nodes"] = json::array();
    for (const Node& n : m.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"xyz", {n.position.x(), n.position.y(), n.position.z()}},
                              {"fixed", {n.fixed[0], n.fixed[1], n.fixed[2]}}});
    }
    j["elements"] = json::array();
    for (const Element& e : m.elements) {
        j["elements"].push_back({{"id", e.id}, {"n", {e.nodes[0], e.nodes[1]}}, {"group", e.group}});
    }
    j["groups"] = json::array();
    for (const DesignGroup& g : m.groups) {
        j["groups"].push_back({{"id", g.id}, {"label", g.label}, {"area", g.area}});
    }
    return j;
}

TrussModel model_from_json(const json& j) {
    TrussModel m;
    m.material.youngs_modulus = j.at("material").at("E").get<double>();
    m.material.mass_density = j.at("material").at("rho").get<double>();
    for (const json& n : j.at("nodes")) {
        Node node;
        node.id = n.at("id").get<int>();
        const auto& xyz = n.at("xyz");
        node.position = Eigen::Vector3d(xyz.at(0).get<double>(), xyz.at(1).get<double>(), xyz.at(2).get<double>());
        const auto& fx = n.at("fixed");
        node.fixed = {fx.at(0).get<bool>(), fx.at(1).get<bool>(), fx.at(2).get<bool>()};
        m.nodes.push_back(node);
    }
    for (const json& e : j.at("elements")) {
        Element el;
        el.id = e.at("id").get<int>();
        el.nodes = {e.at("n").at(0).get<int>(), e.at("n").at(1).get<int>()};
        el.group = e.at("group").get<int>();
        m.elements.push_back(el);
    }
    for (const json& g : j.at("groups")) {
        DesignGroup dg;
        dg.id = g.at("id").get<int>();
        dg.label = g.value("label", std::string{});
        dg.area = g.at("area").get<double>();
        m.groups.push_back(dg);
    }
    return m;
}

}  // namespace

TrussModel load_model(std::istream& in) {
    json j;
    try {
        in >> j;
        return model_from_json(j);
    } catch (const json::exception& ex) {
        throw std::invalid_argument(std::string("malformed model file: ") + ex.what());
    }
}

TrussModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file " + path);
    return load_model(in);
}

void save_model(const TrussModel& model, std::ostream& out) {
    out << model_to_json(model).dump(2) << '\n';
}

void save_model_file(const TrussModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write model file " + path);
    save_model(model, out);
}

}  // namespace symeig
