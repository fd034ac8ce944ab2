#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "det_oracle.hpp"
#include "symeig/eigensolver.hpp"
#include "symeig/families.hpp"
#include "symeig/sensitivity.hpp"

using namespace symeig;

namespace {

AssembledSystem raw_system(const Eigen::MatrixXd& k, const Eigen::MatrixXd& m) {
    AssembledSystem s;
    s.stiffness = k;
    s.mass = m;
    s.free_dofs = static_cast<int>(k.rows());
    return s;
}

}  // namespace

TEST_CASE("scalar and 2x2 oracles") {
    const auto s1 = raw_system(Eigen::MatrixXd::Constant(1, 1, 6.0), Eigen::MatrixXd::Constant(1, 1, 2.0));
    CHECK(solve(s1).eigenvalues(0) == doctest::Approx(3.0).epsilon(1e-14));

    Eigen::MatrixXd k(2, 2);
    k << 2, -1, -1, 2;
    const auto s2 = raw_system(k, Eigen::MatrixXd::Identity(2, 2));
    const Spectrum spec = solve(s2);
    // roots of (2-l)^2 - 1 by hand: 1 and 3
    CHECK(spec.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spec.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("determinant-root oracle agrees for small pencils") {
    // 3-dof: one pinned element in a skew direction plus a second element
    TrussModel m;
    m.material = {100.0, 0.5};
    Node a, b, c;
    a.id = 0;
    a.position = {0, 0, 0};
    a.fixed = {true, true, true};
    b.id = 1;
    b.position = {1.0, 0.4, 0.2};
    c.id = 2;
    c.position = {0.3, 1.2, -0.5};
    c.fixed = {true, true, true};
    m.nodes = {a, b, c};
    Element e1, e2;
    e1.id = 1;
    e1.nodes = {0, 1};
    e1.group = 1;
    e2.id = 2;
    e2.nodes = {1, 2};
    e2.group = 2;
    // third member to give the free node full 3-D inertia
    Node d;
    d.id = 3;
    d.position = {0.8, -0.7, 1.1};
    d.fixed = {true, true, true};
    m.nodes.push_back(d);
    Element e3;
    e3.id = 3;
    e3.nodes = {1, 3};
    e3.group = 1;
    m.elements = {e1, e2, e3};
    m.groups = {DesignGroup{1, "x1", 120.0}, DesignGroup{2, "x2", 80.0}};

    const AssembledSystem sys = assemble(m);
    REQUIRE(sys.free_dofs == 3);
    const Spectrum spec = solve(sys);
    const Eigen::VectorXd roots = testing::det_pencil_roots(sys.stiffness, sys.mass);
    for (int q = 0; q < 3; ++q) {
        CHECK(spec.eigenvalues(q) == doctest::Approx(roots(q)).epsilon(1e-9));
    }

    // synthetic 4x4 symmetric-definite pencil
    Eigen::MatrixXd k(4, 4), mm(4, 4);
    k << 8, 1, 0, 2, 1, 7, 1, 0, 0, 1, 9, 1, 2, 0, 1, 6;
    mm << 4, 1, 0, 0, 1, 5, 1, 0, 0, 1, 4, 1, 0, 0, 1, 3;
    const auto sys4 = raw_system(k, mm);
    const Spectrum spec4 = solve(sys4);
    const Eigen::VectorXd roots4 = testing::det_pencil_roots(k, mm);
    for (int q = 0; q < 4; ++q) {
        CHECK(spec4.eigenvalues(q) == doctest::Approx(roots4(q)).epsilon(1e-9));
    }
}

TEST_CASE("solver contract on the polyhedral presets") {
    struct Case {
        const char* preset;
        int zeros;
        int retained;
    };
    for (const Case c : {Case{"tetra-td", 3, 9}, Case{"octa-oh", 3, 15}, Case{"dodeca-ih", 11, 49},
                         Case{"icosa-ih", 3, 33}}) {
        CAPTURE(c.preset);
        const AssembledSystem sys = assemble(preset_model(c.preset));
        const Spectrum spec = solve(sys);
        CHECK(spec.size() == sys.free_dofs);
        CHECK(spec.zero_count == c.zeros);

        const RetainedSpectrum ret = nonzero_spectrum(spec);
        CHECK(ret.dropped == c.zeros);
        CHECK(ret.size() == c.retained);

        const ResidualReport rep = verify(spec, sys);
        CHECK(rep.max_residual <= 1e-8);
        CHECK(rep.max_m_defect <= 1e-9);
        CHECK(rep.max_k_defect <= 1e-8);

        // ascending order
        for (int q = 1; q < spec.size(); ++q) CHECK(spec.eigenvalues(q) >= spec.eigenvalues(q - 1));
    }
}

TEST_CASE("verify flags a broken eigenvector") {
    const AssembledSystem sys = assemble(preset_model("tetra-td"));
    Spectrum spec = solve(sys);
    spec.eigenvectors.col(3) *= 1.01;
    const ResidualReport rep = verify(spec, sys);
    CHECK(rep.max_m_defect > 1e-9);
}

TEST_CASE("identity mass reduces M-orthonormality to Euclidean") {
    Eigen::MatrixXd k(3, 3);
    k << 5, 1, 0, 1, 4, 1, 0, 1, 3;
    const auto sys = raw_system(k, Eigen::MatrixXd::Identity(3, 3));
    const Spectrum spec = solve(sys);
    const Eigen::MatrixXd gram = spec.eigenvectors.transpose() * spec.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scale invariance of eigenvalues") {
    TrussModel m = preset_model("octa-c2v");
    const Spectrum base = solve(assemble(m));
    for (DesignGroup& g : m.groups) g.area *= 7.25;
    const Spectrum scaled = solve(assemble(m));
    for (int q = base.zero_count; q < base.size(); ++q) {
        CHECK(scaled.eigenvalues(q) ==
              doctest::Approx(base.eigenvalues(q)).epsilon(1e-10));
    }
}

TEST_CASE("solving twice is bitwise identical") {
    const AssembledSystem sys = assemble(preset_model("dodeca-accidental"));
    const Spectrum a = solve(sys);
    const Spectrum b = solve(sys);
    CHECK(a.eigenvalues.size() == b.eigenvalues.size());
    for (int q = 0; q < a.size(); ++q) {
        CHECK(a.eigenvalues(q) == b.eigenvalues(q));  // exact
    }
    CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("indefinite mass is reported") {
    // a single pinned element has axial-only inertia: rank-1 mass
    TrussModel m;
    m.material = {100.0, 0.5};
    Node a, b;
    a.id = 0;
    a.position = {0, 0, 0};
    a.fixed = {true, true, true};
    b.id = 1;
    b.position = {2, 0, 0};
    m.nodes = {a, b};
    Element e;
    e.id = 1;
    e.nodes = {0, 1};
    e.group = 1;
    m.elements = {e};
    m.groups = {DesignGroup{1, "x1", 100.0}};
    CHECK_THROWS_AS((void)solve(assemble(m)), IndefiniteMassError);
}

TEST_CASE("degenerate spectrum is reported") {
    Spectrum s;
    s.eigenvalues = Eigen::VectorXd::Zero(3);
    s.eigenvectors = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS((void)nonzero_spectrum(s), DegenerateSpectrumError);
}

TEST_CASE("frequencies clamp round-off only in omega") {
    Spectrum s;
    s.eigenvalues = Eigen::Vector3d(-1e-12, 4.0, 9.0);
    s.eigenvectors = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::VectorXd w = s.frequencies();
    CHECK(w(0) == 0.0);
    CHECK(w(1) == doctest::Approx(2.0));
    CHECK(w(2) == doctest::Approx(3.0));
    CHECK(s.eigenvalues(0) == -1e-12);  // stored value untouched
}
