#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "symeig/families.hpp"
#include "symeig/sensitivity.hpp"

using namespace symeig;

TEST_CASE("matrix derivatives reconstruct K and M") {
    const TrussModel m = preset_model("dodeca-c5v");
    const AssembledSystem sys = assemble(m);
    const MatrixDerivatives d = matrix_derivatives(m, sys);

    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(sys.free_dofs, sys.free_dofs);
    Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(sys.free_dofs, sys.free_dofs);
    for (size_t e = 0; e < m.elements.size(); ++e) {
        const double x = m.area_of(m.elements[e]);
        const ElementDerivative& ed = d.elements[e];
        for (int a = 0; a < 6; ++a) {
            if (ed.dofs[size_t(a)] < 0) continue;
            for (int b = 0; b < 6; ++b) {
                if (ed.dofs[size_t(b)] < 0) continue;
                k(ed.dofs[size_t(a)], ed.dofs[size_t(b)]) += x * ed.stiffness(a, b);
                mm(ed.dofs[size_t(a)], ed.dofs[size_t(b)]) += x * ed.mass(a, b);
            }
        }
    }
    CHECK((k - sys.stiffness).cwiseAbs().maxCoeff() <= 1e-12 * sys.stiffness.cwiseAbs().maxCoeff());
    CHECK((mm - sys.mass).cwiseAbs().maxCoeff() <= 1e-12 * sys.mass.cwiseAbs().maxCoeff());
}

TEST_CASE("central difference stencil is exact to O(h^2)") {
    CHECK(central_difference([](double x) { return x * x; }, 1.0, 1e-6) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(central_difference([](double x) { return std::sin(x); }, 0.3, 1e-5) ==
          doctest::Approx(std::cos(0.3)).epsilon(1e-9));
    CHECK_THROWS_AS((void)central_difference([](double x) { return x; }, 0.0, -1.0),
                    std::invalid_argument);
}

TEST_CASE("reference group sensitivities, full I_h dodecahedron") {
    const SolvedModel s = analyze(preset_model("dodeca-ih"));
    CHECK(eig_sensitivity(s, 0, 1) == doctest::Approx(-0.128916).epsilon(1e-4));
    CHECK(eig_sensitivity(s, 0, 2) == doctest::Approx(0.064458).epsilon(1e-4));
    CHECK(eig_sensitivity(s, 3, 1) == doctest::Approx(-0.434554).epsilon(1e-4));
    CHECK(eig_sensitivity(s, 3, 2) == doctest::Approx(0.217277).epsilon(1e-4));

    // invariant cluster: zero for every group
    for (int g : {1, 2}) {
        CHECK(std::abs(cluster_mean_sensitivity(s, 11, g)) < 1e-10);
    }

    CHECK_THROWS_AS((void)eig_sensitivity(s, 99, 1), std::out_of_range);
    CHECK_THROWS_AS((void)eig_sensitivity(s, 0, 42), std::invalid_argument);
}

TEST_CASE("tetrahedral T_d first eigenvalue sensitivity") {
    const SolvedModel s = analyze(preset_model("tetra-td"));
    CHECK(eig_sensitivity(s, 0, 1) == doctest::Approx(-0.177749).epsilon(1e-4));
    CHECK(eig_sensitivity(s, 0, 2) == doctest::Approx(0.088874).epsilon(1e-4));
}

TEST_CASE("invariant eigenvalues have zero sensitivity everywhere") {
    const SolvedModel s = analyze(preset_model("octa-oh"));
    for (int q = 0; q < s.retained.size(); ++q) {
        const double lam = s.retained.values(q);
        if (std::abs(lam - 1200.0) < 1e-6 || std::abs(lam - 300.0) < 1e-6) {
            for (const DesignGroup& g : s.model.groups) {
                CHECK(std::abs(eig_sensitivity(s, q, g.id)) < 1e-9 * lam);
            }
        }
    }
}

TEST_CASE("Euler homogeneity identity") {
    for (const char* preset : {"dodeca-ih", "dodeca-c5v", "tetra-c3v", "octa-c4v", "dome6-cnv",
                               "icosa-accidental"}) {
        CAPTURE(preset);
        const SolvedModel s = analyze(preset_model(preset));
        for (int q = 0; q < s.retained.size(); ++q) {
            double weighted = 0.0;
            for (const DesignGroup& g : s.model.groups) {
                weighted += g.area * eig_sensitivity(s, q, g.id);
            }
            CHECK(std::abs(weighted) <= 1e-9 * std::abs(s.retained.values(q)) + 1e-12);
        }
        // same identity for cluster means and the aggregates
        for (int c = 0; c < s.clusters.count(); ++c) {
            double weighted = 0.0;
            for (const DesignGroup& g : s.model.groups) {
                weighted += g.area * cluster_mean_sensitivity(s, c, g.id);
            }
            CHECK(std::abs(weighted) <= 1e-9 * std::abs(s.clusters[c].mean) + 1e-12);
        }
        const int n = s.retained.size();
        double wp = 0.0, wk = 0.0;
        for (const DesignGroup& g : s.model.groups) {
            wp += g.area * pnorm_gradient(s, n, 10.0, g.id);
            wk += g.area * ks_gradient(s, n, 10.0, g.id);
        }
        CHECK(std::abs(wp) <= 1e-9 * pnorm(s.retained.values, 10.0));
        CHECK(std::abs(wk) <= 1e-9 * std::abs(ks(s.retained.values, 10.0)));
    }
}

TEST_CASE("cluster-mean sensitivity is basis invariant") {
    const SolvedModel base = analyze(preset_model("dodeca-accidental"));
    std::mt19937 rng(20240817);
    std::normal_distribution<double> gauss;

    SolvedModel rotated = base;
    for (const Cluster& c : base.clusters.clusters) {
        if (c.count < 2) continue;
        // random orthogonal Q via QR; an M-orthonormal basis stays M-orthonormal
        Eigen::MatrixXd g(c.count, c.count);
        for (int i = 0; i < c.count; ++i) {
            for (int j = 0; j < c.count; ++j) g(i, j) = gauss(rng);
        }
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        const Eigen::MatrixXd q = qr.householderQ();
        const int col = base.retained.full_index(c.start);
        rotated.spectrum.eigenvectors.middleCols(col, c.count) =
            base.spectrum.eigenvectors.middleCols(col, c.count) * q;
    }

    for (int c = 0; c < base.clusters.count(); ++c) {
        for (const DesignGroup& g : base.model.groups) {
            const double a = cluster_mean_sensitivity(base, c, g.id);
            const double b = cluster_mean_sensitivity(rotated, c, g.id);
            CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("singleton cluster mean reduces to the eigenvalue sensitivity") {
    const SolvedModel s = analyze(preset_model("dodeca-ih"));
    const int simple_cluster = 5;  // the lone simple eigenvalue 892.457
    REQUIRE(s.clusters[simple_cluster].count == 1);
    CHECK(s.clusters[simple_cluster].mean == doctest::Approx(892.457).epsilon(1e-5));
    for (const DesignGroup& g : s.model.groups) {
        CHECK(cluster_mean_sensitivity(s, simple_cluster, g.id) ==
              doctest::Approx(eig_sensitivity(s, s.clusters[simple_cluster].start, g.id)).epsilon(1e-14));
    }
}

TEST_CASE("p-norm closed forms") {
    Eigen::VectorXd one(1);
    one << 7.5;
    for (double p : {1.0, 2.0, 10.0}) CHECK(pnorm(one, p) == doctest::Approx(7.5).epsilon(1e-14));

    Eigen::VectorXd equal = Eigen::VectorXd::Constant(5, 3.0);
    CHECK(pnorm(equal, 10.0) == doctest::Approx(3.0 * std::pow(5.0, 0.1)).epsilon(1e-14));

    Eigen::VectorXd v(4);
    v << 1.0, 5.0, 2.0, 4.0;
    const double star = pnorm(v, 10.0);
    CHECK(star >= v.maxCoeff());
    CHECK(star <= v.maxCoeff() * std::pow(4.0, 0.1));

    Eigen::VectorXd neg(2);
    neg << 1.0, -1.0;
    CHECK_THROWS_AS((void)pnorm(neg, 10.0), std::domain_error);
    CHECK_THROWS_AS((void)pnorm(v, 0.5), std::invalid_argument);
}

TEST_CASE("KS closed forms and overflow safety") {
    Eigen::VectorXd one(1);
    one << 42.0;
    CHECK(ks(one, 10.0) == doctest::Approx(42.0).epsilon(1e-14));

    Eigen::VectorXd equal = Eigen::VectorXd::Constant(4, 2.5);
    CHECK(ks(equal, 10.0) == doctest::Approx(2.5 + std::log(4.0) / 10.0).epsilon(1e-14));

    // values that would overflow exp(q*lambda) without max subtraction
    Eigen::VectorXd big(3);
    big << 600.0, 612.0, 630.0;
    const double star = ks(big, 10.0);
    CHECK(std::isfinite(star));
    CHECK(star >= 630.0);
    CHECK(star - 630.0 <= std::log(3.0) / 10.0);
}

TEST_CASE("aggregate gradients match the cluster-mean route over complete clusters") {
    const SolvedModel s = analyze(preset_model("icosa-accidental"));
    const int n = 17;  // complete prefix: clusters 1..4
    const double p = 10.0, qks = 10.0;

    // p-norm re-expressed through cluster means
    ClusterFunction pn;
    pn.cluster_indices = {0, 1, 2, 3};
    std::vector<double> counts;
    for (int c : pn.cluster_indices) counts.push_back(double(s.clusters[c].count));
    pn.value = [counts, p](const Eigen::VectorXd& m) {
        double sum = 0.0;
        for (int i = 0; i < m.size(); ++i) sum += counts[size_t(i)] * std::pow(m(i), p);
        return std::pow(sum, 1.0 / p);
    };
    pn.gradient = [counts, p](const Eigen::VectorXd& m) {
        double sum = 0.0;
        for (int i = 0; i < m.size(); ++i) sum += counts[size_t(i)] * std::pow(m(i), p);
        const double star = std::pow(sum, 1.0 / p);
        Eigen::VectorXd g(m.size());
        for (int i = 0; i < m.size(); ++i) {
            g(i) = counts[size_t(i)] * std::pow(m(i) / star, p - 1.0);
        }
        return g;
    };

    ClusterFunction kf;
    kf.cluster_indices = {0, 1, 2, 3};
    kf.value = [counts, qks](const Eigen::VectorXd& m) {
        const double vmax = m.maxCoeff();
        double sum = 0.0;
        for (int i = 0; i < m.size(); ++i) sum += counts[size_t(i)] * std::exp(qks * (m(i) - vmax));
        return vmax + std::log(sum) / qks;
    };
    kf.gradient = [counts, qks](const Eigen::VectorXd& m) {
        const double vmax = m.maxCoeff();
        double sum = 0.0;
        Eigen::VectorXd w(m.size());
        for (int i = 0; i < m.size(); ++i) {
            w(i) = counts[size_t(i)] * std::exp(qks * (m(i) - vmax));
            sum += w(i);
        }
        return Eigen::VectorXd(w / sum);
    };

    for (const DesignGroup& g : s.model.groups) {
        const double direct_p = pnorm_gradient(s, n, p, g.id);
        const double via_means_p = cluster_function_sensitivity(s, pn, g.id);
        CHECK(std::abs(direct_p - via_means_p) <= 1e-9 * std::max(1.0, std::abs(direct_p)));

        const double direct_k = ks_gradient(s, n, qks, g.id);
        const double via_means_k = cluster_function_sensitivity(s, kf, g.id);
        CHECK(std::abs(direct_k - via_means_k) <= 1e-9 * std::max(1.0, std::abs(direct_k)));
    }
}

TEST_CASE("cluster function refuses incomplete clusters") {
    const SolvedModel s = analyze(preset_model("icosa-accidental"));
    ClusterFunction f;
    f.cluster_indices = {3};  // cluster 4 spans retained positions 13..17
    f.value = [](const Eigen::VectorXd& m) { return m(0); };
    f.gradient = [](const Eigen::VectorXd& m) { return Eigen::VectorXd::Ones(m.size()); };
    CHECK_THROWS_AS((void)cluster_function_value(s, f, 15), IncompleteClusterError);
    CHECK_NOTHROW((void)cluster_function_value(s, f, 17));
    CHECK_NOTHROW((void)cluster_function_value(s, f));

    // projection reduces to the cluster-mean sensitivity
    for (const DesignGroup& g : s.model.groups) {
        CHECK(cluster_function_sensitivity(s, f, g.id) ==
              doctest::Approx(cluster_mean_sensitivity(s, 3, g.id)).epsilon(1e-14));
    }
}

TEST_CASE("demonstration polynomials") {
    const DemoPolynomials equal = demo_polynomials(2.0, 2.0, 2.0);
    CHECK(equal.g == doctest::Approx(3.0 * 16.0).epsilon(1e-14));          // 3 c^4
    CHECK(equal.h == doctest::Approx(2.0 * 16.0 + 8.0).epsilon(1e-14));    // 2 c^4 + c^3

    // permutation symmetry of g, asymmetry of h
    const DemoPolynomials a = demo_polynomials(1.0, 2.0, 3.0);
    const DemoPolynomials b = demo_polynomials(3.0, 1.0, 2.0);
    CHECK(a.g == doctest::Approx(b.g).epsilon(1e-14));
    CHECK(a.h != b.h);

    // gradients against a finite-difference probe
    const double h = 1e-6;
    const Eigen::Vector3d lam(1.3, 2.1, 0.7);
    const DemoPolynomials at = demo_polynomials(lam(0), lam(1), lam(2));
    for (int i = 0; i < 3; ++i) {
        auto eval_g = [&](double x) {
            Eigen::Vector3d l = lam;
            l(i) = x;
            return demo_polynomials(l(0), l(1), l(2)).g;
        };
        auto eval_h = [&](double x) {
            Eigen::Vector3d l = lam;
            l(i) = x;
            return demo_polynomials(l(0), l(1), l(2)).h;
        };
        CHECK(central_difference(eval_g, lam(i), h) == doctest::Approx(at.dg(i)).epsilon(1e-6));
        CHECK(central_difference(eval_h, lam(i), h) == doctest::Approx(at.dh(i)).epsilon(1e-6));
    }
}

TEST_CASE("CDM matches analytical for a differentiable case") {
    const SolvedModel s = analyze(preset_model("dodeca-ih"));
    const Quantity q = eigenvalue_quantity(s, 0);
    const double cdm = cdm_sensitivity(s.model, q.value, 1);
    CHECK(cdm == doctest::Approx(-0.128916).epsilon(1e-4));
    CHECK(cdm == doctest::Approx(eig_sensitivity(s, 0, 1)).epsilon(1e-5));
}

TEST_CASE("CDM exposes the accidental-symmetry breakdown") {
    const SolvedModel s = analyze(preset_model("dodeca-accidental"));
    const Quantity q = eigenvalue_quantity(s, 0);
    CHECK(cdm_sensitivity(s.model, q.value, 1) == doctest::Approx(-0.170032).epsilon(1e-4));
    CHECK(cdm_sensitivity(s.model, q.value, 2) == doctest::Approx(0.064458).epsilon(1e-4));

    // the x2 direction keeps the full orbit, so it still matches analytically
    const MatchTolerance tol;
    CHECK(sensitivities_match(eig_sensitivity(s, 0, 2), cdm_sensitivity(s.model, q.value, 2), tol));
    CHECK_FALSE(sensitivities_match(eig_sensitivity(s, 0, 1), cdm_sensitivity(s.model, q.value, 1), tol));
}

TEST_CASE("partition consistency across the accidental split") {
    const SolvedModel ih = analyze(preset_model("dodeca-ih"));
    const SolvedModel acc = analyze(preset_model("dodeca-accidental"));
    REQUIRE(ih.clusters.count() == acc.clusters.count());
    for (int c = 0; c < acc.clusters.count(); ++c) {
        const double split = cluster_mean_sensitivity(acc, c, 1) + cluster_mean_sensitivity(acc, c, 3) +
                             cluster_mean_sensitivity(acc, c, 4);
        const double full = cluster_mean_sensitivity(ih, c, 1);
        CHECK(std::abs(split - full) <= 1e-6 * std::max(1e-3, std::abs(full)));
        CHECK(cluster_mean_sensitivity(acc, c, 2) ==
              doctest::Approx(cluster_mean_sensitivity(ih, c, 2)).epsilon(1e-8));
    }
}

TEST_CASE("audit verdicts and report shape") {
    const SolvedModel s = analyze(preset_model("dodeca-accidental"));
    const AuditReport rep =
        audit(s, {eigenvalue_quantity(s, 0), cluster_mean_quantity(s, 0)});
    REQUIRE(rep.rows.size() == 8);  // 2 quantities x 4 groups
    REQUIRE(rep.verdicts.size() == 2);
    CHECK_FALSE(rep.verdicts[0].differentiable);
    CHECK(rep.verdicts[1].differentiable);
    // a verdict is the conjunction of its rows
    for (const QuantityVerdict& v : rep.verdicts) {
        bool all = true;
        for (const SensitivityRow& row : rep.rows) {
            if (row.quantity == v.quantity) all = all && row.matches;
        }
        CHECK(v.differentiable == all);
    }
}

TEST_CASE("every cluster mean is differentiable at the accidental point") {
    const SolvedModel s = analyze(preset_model("dodeca-accidental"));
    std::vector<Quantity> quantities;
    for (int c = 0; c < s.clusters.count(); ++c) quantities.push_back(cluster_mean_quantity(s, c));
    const AuditReport rep = audit(s, quantities);
    REQUIRE(rep.verdicts.size() == 12);
    // the invariant cluster's CDM column carries only stencil noise and must
    // still be judged a match
    for (const QuantityVerdict& v : rep.verdicts) CHECK(v.differentiable);
}

TEST_CASE("CDM rejects a step that would cross zero area") {
    TrussModel m = preset_model("tetra-td");
    m.groups[0].area = 5e-7;
    const SolvedModel s = analyze(preset_model("tetra-td"));
    const Quantity q = eigenvalue_quantity(s, 0);
    CHECK_THROWS_AS((void)cdm_sensitivity(m, q.value, 1), std::invalid_argument);
}
