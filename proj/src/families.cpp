#include "symeig/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace symeig {

namespace {

constexpr double kPsi = 1.6180339887498948482;
constexpr double kYoungs = 100.0;   // MPa
constexpr double kDensity = 0.5;    // g/cm^3

Node make_node(int id, const Eigen::Vector3d& p, bool pinned) {
    Node n;
    n.id = id;
    n.position = p;
    n.fixed = {pinned, pinned, pinned};
    return n;
}

// All elements in one placeholder group so generator output validates.
void finish_single_group(TrussModel& m) {
    m.groups = {DesignGroup{1, "all", 100.0}};
    for (Element& e : m.elements) e.group = 1;
}

// Element ids are assigned 1..n in the order given.
void add_elements(TrussModel& m, const std::vector<std::array<int, 2>>& conn) {
    int id = 1;
    for (const auto& c : conn) {
        Element e;
        e.id = id++;
        e.nodes = c;
        e.group = 1;
        m.elements.push_back(e);
    }
}

// Edges of a polyhedron vertex list: all pairs at the minimal distance.
std::vector<std::array<int, 2>> shortest_pairs(const std::vector<Eigen::Vector3d>& v, double length) {
    std::vector<std::array<int, 2>> out;
    for (size_t i = 0; i < v.size(); ++i) {
        for (size_t j = i + 1; j < v.size(); ++j) {
            if (std::abs((v[i] - v[j]).norm() - length) < 1e-9) {
                out.push_back({static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }
    return out;
}

// Assigns groups from (label, area, element ids) triples.
struct GroupDef {
    std::string label;
    double area;
    std::vector<int> element_ids;
};

void set_partition(TrussModel& m, const std::vector<GroupDef>& defs) {
    m.groups.clear();
    std::map<int, int> owner;
    int gid = 1;
    for (const GroupDef& def : defs) {
        m.groups.push_back(DesignGroup{gid, def.label, def.area});
        for (int e : def.element_ids) owner[e] = gid;
        ++gid;
    }
    for (Element& e : m.elements) {
        auto it = owner.find(e.id);
        if (it == owner.end()) throw std::logic_error("preset leaves element without a group");
        e.group = it->second;
    }
}

void set_singletons(TrussModel& m, const std::vector<double>& areas) {
    if (areas.size() != m.elements.size()) throw std::logic_error("one area per element required");
    m.groups.clear();
    for (size_t i = 0; i < areas.size(); ++i) {
        const int gid = static_cast<int>(i) + 1;
        m.groups.push_back(DesignGroup{gid, "x" + std::to_string(gid), areas[i]});
        m.elements[i].group = gid;
    }
}

std::vector<int> id_range(int first, int last) {  // inclusive
    std::vector<int> out;
    for (int i = first; i <= last; ++i) out.push_back(i);
    return out;
}

}  // namespace

TrussModel make_dome(int n) {
    if (n < 3) throw std::invalid_argument("dome requires N >= 3");
    const double ring_radius = 2.0;
    const double ring_height = 1.0;
    const double apex_height = 2.0;
    // Supports sit half a sector past the ring nodes, at the radius that puts
    // them a plan distance of 2 from each adjacent ring node.
    const double support_radius = 2.0 * ring_radius * std::cos(std::numbers::pi / n);

    TrussModel m;
    m.material = {kYoungs, kDensity};
    m.nodes.push_back(make_node(0, {0.0, 0.0, apex_height}, false));
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        m.nodes.push_back(make_node(1 + i,
                                    {ring_radius * std::cos(a), ring_radius * std::sin(a), ring_height},
                                    false));
    }
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * (i + 0.5) / n;
        m.nodes.push_back(make_node(1 + n + i,
                                    {support_radius * std::cos(a), support_radius * std::sin(a), 0.0},
                                    true));
    }

    std::vector<std::array<int, 2>> conn;
    for (int i = 0; i < n; ++i) conn.push_back({0, 1 + i});                          // ribs
    for (int i = 0; i < n; ++i) conn.push_back({1 + i, 1 + n + i});                  // diagonals, own support
    for (int i = 0; i < n; ++i) conn.push_back({1 + (i + 1) % n, 1 + n + i});        // diagonals, next ring node
    for (int i = 0; i < n; ++i) conn.push_back({1 + i, 1 + (i + 1) % n});            // ring edges
    add_elements(m, conn);
    finish_single_group(m);
    return m;
}

TrussModel make_tetrahedral() {
    const double s = 2.0 / std::sqrt(3.0);
    const std::vector<Eigen::Vector3d> v = {
        {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};

    TrussModel m;
    m.material = {kYoungs, kDensity};
    for (int i = 0; i < 4; ++i) m.nodes.push_back(make_node(i, v[size_t(i)], false));
    for (int i = 0; i < 4; ++i) m.nodes.push_back(make_node(4 + i, 2.0 * v[size_t(i)], true));

    // Base-face edges (vertices 1,2,3), then the apex-vertex edges, then the
    // base legs, then the apex leg; this matches the reference variable order.
    std::vector<std::array<int, 2>> conn = {
        {1, 2}, {1, 3}, {2, 3},          // base face
        {0, 1}, {0, 2}, {0, 3},          // apex edges
        {1, 5}, {2, 6}, {3, 7},          // base legs
        {0, 4},                          // apex leg
    };
    add_elements(m, conn);
    finish_single_group(m);
    return m;
}

TrussModel make_octahedral() {
    const std::vector<Eigen::Vector3d> v = {
        {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

    TrussModel m;
    m.material = {kYoungs, kDensity};
    for (int i = 0; i < 6; ++i) m.nodes.push_back(make_node(i, v[size_t(i)], false));
    for (int i = 0; i < 6; ++i) m.nodes.push_back(make_node(6 + i, 1.5 * v[size_t(i)], true));

    std::vector<std::array<int, 2>> conn = shortest_pairs(v, std::sqrt(2.0));  // 12 edges, lexicographic
    for (int i = 0; i < 6; ++i) conn.push_back({i, 6 + i});
    add_elements(m, conn);
    finish_single_group(m);
    return m;
}

TrussModel make_dodecahedral() {
    std::vector<Eigen::Vector3d> v;
    for (double x : {1.0, -1.0})
        for (double y : {1.0, -1.0})
            for (double z : {1.0, -1.0}) v.emplace_back(x, y, z);
    for (double a : {1.0, -1.0}) {
        for (double b : {1.0, -1.0}) {
            v.emplace_back(0.0, a / kPsi, b * kPsi);
            v.emplace_back(b * kPsi, 0.0, a / kPsi);
            v.emplace_back(a / kPsi, b * kPsi, 0.0);
        }
    }

    TrussModel m;
    m.material = {kYoungs, kDensity};
    for (int i = 0; i < 20; ++i) m.nodes.push_back(make_node(i, v[size_t(i)], false));
    for (int i = 0; i < 20; ++i) m.nodes.push_back(make_node(20 + i, 1.5 * v[size_t(i)], true));

    std::vector<std::array<int, 2>> conn = shortest_pairs(v, 2.0 / kPsi);  // 30 edges
    for (int i = 0; i < 20; ++i) conn.push_back({i, 20 + i});
    add_elements(m, conn);
    finish_single_group(m);
    return m;
}

TrussModel make_icosahedral() {
    std::vector<Eigen::Vector3d> v;
    for (double a : {1.0, -1.0}) {
        for (double b : {1.0, -1.0}) {
            v.emplace_back(0.0, a, b * kPsi);
            v.emplace_back(a, b * kPsi, 0.0);
            v.emplace_back(a * kPsi, 0.0, b);
        }
    }

    TrussModel m;
    m.material = {kYoungs, kDensity};
    for (int i = 0; i < 12; ++i) m.nodes.push_back(make_node(i, v[size_t(i)], false));
    for (int i = 0; i < 12; ++i) m.nodes.push_back(make_node(12 + i, 1.5 * v[size_t(i)], true));

    std::vector<std::array<int, 2>> conn = shortest_pairs(v, 2.0);  // 30 edges
    for (int i = 0; i < 12; ++i) conn.push_back({i, 12 + i});
    add_elements(m, conn);
    finish_single_group(m);
    return m;
}

TrussModel perturb_apex(const TrussModel& dome, const Eigen::Vector3d& delta) {
    TrussModel m = dome;
    // The apex is the unique free node on the z axis.
    int apex = -1;
    for (size_t i = 0; i < m.nodes.size(); ++i) {
        const Node& n = m.nodes[i];
        if (n.free() && n.position.head<2>().cwiseAbs().maxCoeff() < 1e-12) {
            if (apex >= 0) throw std::invalid_argument("model has more than one candidate apex");
            apex = static_cast<int>(i);
        }
    }
    if (apex < 0) throw std::invalid_argument("model has no apex node");
    m.nodes[size_t(apex)].position += delta;
    return m;
}

Eigen::Vector3d dome_apex_perturbation() { return {-0.001, 0.008, 0.0}; }

namespace {

// --- per-family preset partitions ------------------------------------------

bool contains(const std::array<int, 2>& nn, int a) { return nn[0] == a || nn[1] == a; }

TrussModel dome_preset(int n, const std::string& id) {
    TrussModel m = make_dome(n);
    const int ribs_last = n, diag_last = 3 * n, ring_last = 4 * n;
    if (id == "nosym") {
        std::vector<double> areas;
        for (int e = 0; e < 4 * n; ++e) areas.push_back(100.0 + 10.0 * e);
        set_singletons(m, areas);
    } else if (id == "cnv" || id == "c" + std::to_string(n) + "v") {
        set_partition(m, {{"x1", 150.0, id_range(1, ribs_last)},
                          {"x2", 200.0, id_range(ribs_last + 1, diag_last)},
                          {"x3", 50.0, id_range(diag_last + 1, ring_last)}});
    } else {
        throw std::invalid_argument("unknown dome preset: " + id);
    }
    return m;
}

TrussModel tetra_preset(const std::string& id) {
    TrussModel m = make_tetrahedral();
    if (id == "nosym") {
        set_singletons(m, {100, 100, 100, 150, 150, 150, 200, 150, 175, 225});
    } else if (id == "c3v") {
        set_partition(m, {{"x1", 100.0, {1, 2, 3}},      // base-face edges
                          {"x2", 150.0, {4, 5, 6}},      // apex edges
                          {"x3", 200.0, {7, 8, 9, 10}}}  // legs
        );
    } else if (id == "td") {
        set_partition(m, {{"x1", 100.0, id_range(1, 6)}, {"x2", 200.0, id_range(7, 10)}});
    } else {
        throw std::invalid_argument("unknown tetrahedral preset: " + id);
    }
    return m;
}

TrussModel octa_preset(const std::string& id) {
    TrussModel m = make_octahedral();
    // Element ids: edges 1..12 in lexicographic vertex order, legs 13..18.
    // Vertices: 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z.
    std::vector<int> eq, top, bottom, diagA, diagB;
    for (const Element& e : m.elements) {
        if (e.id > 12) continue;
        if (contains(e.nodes, 4)) top.push_back(e.id);
        else if (contains(e.nodes, 5)) bottom.push_back(e.id);
        else eq.push_back(e.id);
    }
    for (const Element& e : m.elements) {
        if (e.id > 12 || contains(e.nodes, 4) || contains(e.nodes, 5)) continue;
        const bool positive_pair = (contains(e.nodes, 0) && contains(e.nodes, 2)) ||
                                   (contains(e.nodes, 1) && contains(e.nodes, 3));
        (positive_pair ? diagA : diagB).push_back(e.id);
    }
    if (id == "nosym") {
        std::vector<double> areas;
        for (int e = 0; e < 18; ++e) areas.push_back(100.0 + 10.0 * e);
        set_singletons(m, areas);
    } else if (id == "oh") {
        set_partition(m, {{"x1", 150.0, id_range(1, 12)}, {"x2", 200.0, id_range(13, 18)}});
    } else if (id == "c4v") {
        set_partition(m, {{"x1", 150.0, eq},
                          {"x2", 300.0, id_range(13, 18)},
                          {"x3", 225.0, top},
                          {"x4", 250.0, bottom}});
    } else if (id == "c2v") {
        std::vector<int> slant = top;
        slant.insert(slant.end(), bottom.begin(), bottom.end());
        std::sort(slant.begin(), slant.end());
        set_partition(m, {{"x1", 150.0, slant},
                          {"x2", 200.0, id_range(13, 18)},
                          {"x3", 150.0, diagA},
                          {"x4", 175.0, diagB}});
    } else {
        throw std::invalid_argument("unknown octahedral preset: " + id);
    }
    return m;
}

TrussModel dodeca_preset(const std::string& id) {
    TrussModel m = make_dodecahedral();
    // Pentagon faces normal to the +-(1,0,psi) axis split the 30 edges into
    // top 5 / bottom 5 / side 20 under the C_5v enforced symmetry.
    const Eigen::Vector3d axis = Eigen::Vector3d(1.0, 0.0, kPsi).normalized();
    double pmax = -1e30;
    for (int i = 0; i < 20; ++i) pmax = std::max(pmax, axis.dot(m.nodes[size_t(i)].position));
    std::set<int> top_nodes, bottom_nodes;
    for (int i = 0; i < 20; ++i) {
        const double p = axis.dot(m.nodes[size_t(i)].position);
        if (std::abs(p - pmax) < 1e-9) top_nodes.insert(m.nodes[size_t(i)].id);
        if (std::abs(p + pmax) < 1e-9) bottom_nodes.insert(m.nodes[size_t(i)].id);
    }
    std::vector<int> top, bottom, side;
    for (const Element& e : m.elements) {
        if (e.id > 30) continue;
        if (top_nodes.count(e.nodes[0]) && top_nodes.count(e.nodes[1])) top.push_back(e.id);
        else if (bottom_nodes.count(e.nodes[0]) && bottom_nodes.count(e.nodes[1])) bottom.push_back(e.id);
        else side.push_back(e.id);
    }

    if (id == "ih") {
        set_partition(m, {{"x1", 100.0, id_range(1, 30)}, {"x2", 200.0, id_range(31, 50)}});
    } else if (id == "c5v") {
        set_partition(m, {{"x1", 100.0, side},
                          {"x2", 200.0, id_range(31, 50)},
                          {"x3", 225.0, top},
                          {"x4", 250.0, bottom}});
    } else if (id == "accidental") {
        set_partition(m, {{"x1", 100.0, side},
                          {"x2", 200.0, id_range(31, 50)},
                          {"x3", 100.0, top},
                          {"x4", 100.0, bottom}});
    } else {
        throw std::invalid_argument("unknown dodecahedral preset: " + id);
    }
    return m;
}

TrussModel icosa_preset(const std::string& id) {
    TrussModel m = make_icosahedral();
    if (id == "ih") {
        set_partition(m, {{"x1", 150.0, id_range(1, 30)}, {"x2", 200.0, id_range(31, 42)}});
    } else if (id == "accidental") {
        // No enforced symmetry: one variable per element, valued as in full I_h.
        std::vector<double> areas;
        for (int e = 1; e <= 42; ++e) areas.push_back(e <= 30 ? 150.0 : 200.0);
        set_singletons(m, areas);
    } else {
        throw std::invalid_argument("unknown icosahedral preset: " + id);
    }
    return m;
}

std::vector<PresetInfo> build_registry() {
    std::vector<PresetInfo> reg;
    auto add = [&](std::string name, std::string family, int n, std::string enforced, std::string desc) {
        PresetInfo p;
        p.name = name;
        p.family = std::move(family);
        p.dome_sections = n;
        p.enforced = std::move(enforced);
        p.file = name + ".json";
        p.description = std::move(desc);
        reg.push_back(std::move(p));
    };
    for (int n = 3; n <= 8; ++n) {
        const std::string nn = std::to_string(n);
        add("dome" + nn + "-nosym", "dome", n, "c1", "dome, C_" + nn + "v geometry, all areas distinct");
        add("dome" + nn + "-cnv", "dome", n, "c" + nn + "v",
            "dome with C_" + nn + "v design variable symmetry");
    }
    for (int n : {6, 8}) {
        const std::string nn = std::to_string(n);
        add("dome" + nn + "-nosym-perturbed", "dome", n, "c1", "apex-perturbed dome, all areas distinct");
        add("dome" + nn + "-cnv-perturbed", "dome", n, "c1",
            "apex-perturbed dome with C_" + nn + "v area groups");
    }
    add("tetra-nosym", "tetrahedral", 0, "c1", "tetrahedral truss, all areas distinct");
    add("tetra-c3v", "tetrahedral", 0, "c3v@tetra", "tetrahedral truss, C_3v design symmetry");
    add("tetra-td", "tetrahedral", 0, "td", "tetrahedral truss, full T_d design symmetry");
    add("octa-nosym", "octahedral", 0, "c1", "octahedral truss, all areas distinct");
    add("octa-c2v", "octahedral", 0, "c2v@45", "octahedral truss, C_2v design symmetry");
    add("octa-c4v", "octahedral", 0, "c4v", "octahedral truss, C_4v design symmetry");
    add("octa-oh", "octahedral", 0, "oh", "octahedral truss, full O_h design symmetry");
    add("dodeca-ih", "dodecahedral", 0, "ih@dodeca", "dodecahedral truss, full I_h design symmetry");
    add("dodeca-c5v", "dodecahedral", 0, "c5v@dodeca", "dodecahedral truss, C_5v design symmetry");
    add("dodeca-accidental", "dodecahedral", 0, "c5v@dodeca",
        "dodecahedral truss, C_5v variables at an accidentally I_h-symmetric point");
    add("icosa-ih", "icosahedral", 0, "ih", "icosahedral truss, full I_h design symmetry");
    add("icosa-accidental", "icosahedral", 0, "c1",
        "icosahedral truss, per-element variables at an accidentally I_h-symmetric point");
    return reg;
}

}  // namespace

const std::vector<PresetInfo>& preset_registry() {
    static const std::vector<PresetInfo> reg = build_registry();
    return reg;
}

const PresetInfo& preset_info(const std::string& name) {
    for (const PresetInfo& p : preset_registry()) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

TrussModel apply_preset(const TrussModel& model, const std::string& family, const std::string& preset_id) {
    // Presets are defined against freshly generated element numbering; the
    // passed model only selects the family parameters.
    if (family == "dome") {
        const int n = (static_cast<int>(model.nodes.size()) - 1) / 2;
        return dome_preset(n, preset_id);
    }
    if (family == "tetrahedral") return tetra_preset(preset_id);
    if (family == "octahedral") return octa_preset(preset_id);
    if (family == "dodecahedral") return dodeca_preset(preset_id);
    if (family == "icosahedral") return icosa_preset(preset_id);
    throw std::invalid_argument("unknown family: " + family);
}

TrussModel preset_model(const std::string& name) {
    const PresetInfo& info = preset_info(name);
    const bool perturbed = name.find("-perturbed") != std::string::npos;
    std::string id;
    if (info.family == "dome") {
        id = name.find("-nosym") != std::string::npos ? "nosym" : "cnv";
    } else {
        id = name.substr(name.find('-') + 1);
    }
    TrussModel m;
    if (info.family == "dome") {
        m = dome_preset(info.dome_sections, id);
        if (perturbed) m = perturb_apex(m, dome_apex_perturbation());
    } else if (info.family == "tetrahedral") {
        m = tetra_preset(id);
    } else if (info.family == "octahedral") {
        m = octa_preset(id);
    } else if (info.family == "dodecahedral") {
        m = dodeca_preset(id);
    } else {
        m = icosa_preset(id);
    }
    m.validate();
    return m;
}

}  // namespace symeig
