#include "symeig/pointgroup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symeig {

namespace {

constexpr double kPsi = 1.6180339887498948482;  // (1 + sqrt 5) / 2
constexpr double kMatrixMatchTol = 1e-9;

bool same_matrix(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
    return (a - b).cwiseAbs().maxCoeff() <= kMatrixMatchTol;
}

Eigen::Matrix3d rotation_about(const Eigen::Vector3d& axis, double angle) {
    return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Eigen::Matrix3d reflection(const Eigen::Vector3d& plane_normal) {
    const Eigen::Vector3d n = plane_normal.normalized();
    return Eigen::Matrix3d::Identity() - 2.0 * n * n.transpose();
}

// Multiplies generators until no new matrices appear. The cap guards against
// a non-closing generator set (which would indicate a construction bug).
std::vector<Eigen::Matrix3d> close_under_products(std::vector<Eigen::Matrix3d> gens, int cap = 1000) {
    std::vector<Eigen::Matrix3d> group;
    group.push_back(Eigen::Matrix3d::Identity());
    auto insert_if_new = [&](const Eigen::Matrix3d& m) {
        for (const Eigen::Matrix3d& g : group) {
            if (same_matrix(g, m)) return false;
        }
        group.push_back(m);
        return true;
    };
    for (const Eigen::Matrix3d& g : gens) insert_if_new(g);

    bool grew = true;
    while (grew) {
        grew = false;
        const size_t n = group.size();
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                const Eigen::Matrix3d prod = group[i] * group[j];
                if (insert_if_new(prod)) grew = true;
                if (static_cast<int>(group.size()) > cap) {
                    throw std::runtime_error("group closure exceeded its cap; generators do not close");
                }
            }
        }
    }
    return group;
}

void check_order(const PointGroup& g, int expected) {
    if (g.order() != expected) {
        throw std::runtime_error("group " + g.name + " closed at order " + std::to_string(g.order()) +
                                 ", expected " + std::to_string(expected));
    }
    for (const Eigen::Matrix3d& m : g.matrices) {
        if ((m * m.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::runtime_error("group " + g.name + " contains a non-orthogonal matrix");
        }
    }
}

// C_3v about the (1,1,1) axis of the reference tetrahedron.
PointGroup make_c3v_tetra() {
    Eigen::Matrix3d cyc;
    cyc << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    Eigen::Matrix3d swap_yz;
    swap_yz << 1, 0, 0, 0, 0, 1, 0, 1, 0;
    PointGroup g{"c3v@tetra", close_under_products({cyc, swap_yz})};
    check_order(g, 6);
    return g;
}

// C_5v about the dodecahedron face axis (1, 0, psi).
PointGroup make_c5v_dodeca() {
    const Eigen::Vector3d axis(1.0, 0.0, kPsi);
    const Eigen::Matrix3d r5 = rotation_about(axis, 2.0 * std::numbers::pi / 5.0);
    const Eigen::Matrix3d mirror = reflection(Eigen::Vector3d::UnitY());  // y=0 plane contains the axis
    PointGroup g{"c5v@dodeca", close_under_products({r5, mirror})};
    check_order(g, 10);
    return g;
}

}  // namespace

PointGroup make_cnv(int n, double mirror_offset) {
    if (n < 2) throw std::invalid_argument("C_Nv requires N >= 2");
    const Eigen::Matrix3d rot = rotation_about(Eigen::Vector3d::UnitZ(), 2.0 * std::numbers::pi / n);
    const Eigen::Vector3d normal(-std::sin(mirror_offset), std::cos(mirror_offset), 0.0);
    PointGroup g{"c" + std::to_string(n) + "v", close_under_products({rot, reflection(normal)})};
    check_order(g, 2 * n);
    return g;
}

PointGroup make_td() {
    Eigen::Matrix3d cyc;
    cyc << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    Eigen::Matrix3d swap_xy;
    swap_xy << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    const Eigen::Matrix3d c2z = Eigen::Vector3d(-1, -1, 1).asDiagonal();
    PointGroup g{"td", close_under_products({cyc, swap_xy, c2z})};
    check_order(g, 24);
    return g;
}

PointGroup make_oh() {
    Eigen::Matrix3d cyc;
    cyc << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    Eigen::Matrix3d swap_xy;
    swap_xy << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    const Eigen::Matrix3d flip_x = Eigen::Vector3d(-1, 1, 1).asDiagonal();
    PointGroup g{"oh", close_under_products({cyc, swap_xy, flip_x})};
    check_order(g, 48);
    return g;
}

PointGroup make_ih(IhOrientation orientation) {
    Eigen::Matrix3d cyc;
    cyc << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    const Eigen::Matrix3d flip = Eigen::Vector3d(-1, -1, 1).asDiagonal();
    const Eigen::Matrix3d inv = -Eigen::Matrix3d::Identity();
    // A five-fold axis: through an icosahedron vertex in the icosahedral
    // orientation, through a dodecahedron face centre in the dodecahedral one.
    const Eigen::Vector3d axis = orientation == IhOrientation::icosahedral
                                     ? Eigen::Vector3d(0.0, 1.0, kPsi)
                                     : Eigen::Vector3d(1.0, 0.0, kPsi);
    const Eigen::Matrix3d r5 = rotation_about(axis, 2.0 * std::numbers::pi / 5.0);
    PointGroup g{orientation == IhOrientation::icosahedral ? "ih" : "ih@dodeca",
                 close_under_products({cyc, flip, inv, r5})};
    check_order(g, 120);
    return g;
}

PointGroup make_group(const std::string& spec) {
    if (spec == "c1" || spec == "none" || spec.empty()) {
        return PointGroup{"c1", {Eigen::Matrix3d::Identity()}};
    }
    if (spec == "td") return make_td();
    if (spec == "oh") return make_oh();
    if (spec == "ih") return make_ih(IhOrientation::icosahedral);
    if (spec == "ih@dodeca") return make_ih(IhOrientation::dodecahedral);
    if (spec == "c3v@tetra") return make_c3v_tetra();
    if (spec == "c5v@dodeca") return make_c5v_dodeca();
    if (spec.size() >= 3 && spec.front() == 'c') {
        const size_t v = spec.find('v');
        if (v != std::string::npos && v > 1) {
            const int n = std::stoi(spec.substr(1, v - 1));
            double offset = 0.0;
            if (v + 1 < spec.size()) {
                if (spec[v + 1] != '@') throw std::invalid_argument("bad group spec: " + spec);
                offset = std::stod(spec.substr(v + 2)) * std::numbers::pi / 180.0;
            }
            PointGroup g = make_cnv(n, offset);
            g.name = spec;
            return g;
        }
    }
    throw std::invalid_argument("unknown group spec: " + spec);
}

namespace {

// Node permutation induced by one group matrix, or nullopt if some node image
// misses every node (respecting the support flags).
std::optional<std::vector<int>> node_permutation(const TrussModel& model, const Eigen::Matrix3d& g,
                                                 double tol) {
    const size_t n = model.nodes.size();
    std::vector<int> perm(n, -1);
    for (size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d image = g * model.nodes[i].position;
        int hit = -1;
        for (size_t j = 0; j < n; ++j) {
            if ((model.nodes[j].position - image).cwiseAbs().maxCoeff() <= tol) {
                hit = static_cast<int>(j);
                break;
            }
        }
        if (hit < 0) return std::nullopt;
        if (model.nodes[size_t(hit)].pinned() != model.nodes[i].pinned()) return std::nullopt;
        perm[i] = hit;
    }
    return perm;
}

// Element permutation induced by a node permutation, or nullopt.
std::optional<std::vector<int>> element_permutation(const TrussModel& model,
                                                    const std::vector<int>& node_perm) {
    const size_t ne = model.elements.size();
    std::vector<int> perm(ne, -1);
    for (size_t e = 0; e < ne; ++e) {
        const int a = node_perm[size_t(model.node_index(model.elements[e].nodes[0]))];
        const int b = node_perm[size_t(model.node_index(model.elements[e].nodes[1]))];
        const int ia = model.nodes[size_t(a)].id;
        const int ib = model.nodes[size_t(b)].id;
        int hit = -1;
        for (size_t f = 0; f < ne; ++f) {
            const auto& nn = model.elements[f].nodes;
            if ((nn[0] == ia && nn[1] == ib) || (nn[0] == ib && nn[1] == ia)) {
                hit = static_cast<int>(f);
                break;
            }
        }
        if (hit < 0) return std::nullopt;
        perm[e] = hit;
    }
    return perm;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int x) {
        while (parent[size_t(x)] != x) {
            parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
            x = parent[size_t(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[size_t(find(a))] = find(b); }
};

std::vector<std::vector<int>> components(UnionFind& uf, const std::vector<int>& ids) {
    std::vector<std::vector<int>> out;
    std::vector<int> root_slot(uf.parent.size(), -1);
    for (size_t i = 0; i < uf.parent.size(); ++i) {
        const int r = uf.find(static_cast<int>(i));
        if (root_slot[size_t(r)] < 0) {
            root_slot[size_t(r)] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[size_t(root_slot[size_t(r)])].push_back(ids[i]);
    }
    return out;
}

}  // namespace

OrbitPartition orbits(const TrussModel& model, const PointGroup& group, double tol) {
    UnionFind nodes_uf(model.nodes.size());
    UnionFind elems_uf(model.elements.size());
    for (const Eigen::Matrix3d& g : group.matrices) {
        const auto nperm = node_permutation(model, g, tol);
        if (!nperm) {
            throw std::invalid_argument("model is not geometrically symmetric under group " + group.name);
        }
        const auto eperm = element_permutation(model, *nperm);
        if (!eperm) {
            throw std::invalid_argument("group " + group.name + " does not permute the element set");
        }
        for (size_t i = 0; i < nperm->size(); ++i) nodes_uf.unite(static_cast<int>(i), (*nperm)[i]);
        for (size_t e = 0; e < eperm->size(); ++e) elems_uf.unite(static_cast<int>(e), (*eperm)[e]);
    }
    std::vector<int> node_ids, elem_ids;
    for (const Node& n : model.nodes) node_ids.push_back(n.id);
    for (const Element& e : model.elements) elem_ids.push_back(e.id);
    OrbitPartition p;
    p.node_orbits = components(nodes_uf, node_ids);
    p.element_orbits = components(elems_uf, elem_ids);
    return p;
}

SymmetryCheck check_symmetry(const TrussModel& model, const PointGroup& group, double tol) {
    SymmetryCheck result;
    result.geometric = true;
    result.design = true;
    for (const Eigen::Matrix3d& g : group.matrices) {
        const auto nperm = node_permutation(model, g, tol);
        if (!nperm) {
            result.geometric = false;
            result.design = false;
            return result;
        }
        const auto eperm = element_permutation(model, *nperm);
        if (!eperm) {
            result.geometric = false;
            result.design = false;
            return result;
        }
        for (size_t e = 0; e < eperm->size(); ++e) {
            const double a = model.area_of(model.elements[e]);
            const double b = model.area_of(model.elements[size_t((*eperm)[e])]);
            if (std::abs(a - b) > 1e-12 * std::max(a, b)) {
                result.design = false;
                break;
            }
        }
    }
    return result;
}

AccidentalReport detect_accidental(const TrussModel& model, const std::string& enforced_spec, double tol) {
    const PointGroup enforced = make_group(enforced_spec);

    std::vector<std::string> candidates = {"ih", "ih@dodeca", "oh", "td"};
    for (int n = 8; n >= 3; --n) {
        candidates.push_back("c" + std::to_string(n) + "v");
        candidates.push_back("c" + std::to_string(n) + "v@" + std::to_string(90.0 / n));
    }
    candidates.push_back("c5v@dodeca");
    candidates.push_back("c3v@tetra");

    AccidentalReport report;
    report.enforced = enforced.name;
    report.enforced_order = enforced.order();
    report.detected = enforced.name;
    report.detected_order = 1;
    if (check_symmetry(model, enforced, tol).design) report.detected_order = enforced.order();

    for (const std::string& spec : candidates) {
        const PointGroup g = make_group(spec);
        if (g.order() <= report.detected_order) continue;
        if (check_symmetry(model, g, tol).design) {
            report.detected = g.name;
            report.detected_order = g.order();
        }
    }
    report.accidental = report.detected_order > report.enforced_order;
    return report;
}

}  // namespace symeig
