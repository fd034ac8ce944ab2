#include "symeig/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace symeig {

MatrixDerivatives matrix_derivatives(const TrussModel& model, const AssembledSystem& system) {
    // Node id -> position in the dof map's (id-sorted) ordering.
    std::vector<int> ids;
    ids.reserve(model.nodes.size());
    for (const Node& n : model.nodes) ids.push_back(n.id);
    std::sort(ids.begin(), ids.end());
    std::unordered_map<int, int> pos;
    for (size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = static_cast<int>(i);

    MatrixDerivatives out;
    out.elements.reserve(model.elements.size());
    for (const Element& e : model.elements) {
        const double length = element_length(model, e.id);
        const Eigen::Matrix2d kbar = local_stiffness(1.0, model.material.youngs_modulus, length);
        const Eigen::Matrix2d mbar = local_mass(1.0, model.material.mass_density, length);
        const Eigen::Matrix<double, 2, 6> t = transformation(model, e.id);

        ElementDerivative d;
        d.stiffness = t.transpose() * kbar * t;
        d.mass = t.transpose() * mbar * t;
        const int lo = std::min(e.nodes[0], e.nodes[1]);
        const int hi = std::max(e.nodes[0], e.nodes[1]);
        for (int axis = 0; axis < 3; ++axis) {
            d.dofs[size_t(axis)] = system.dof_map[size_t(3 * pos.at(lo) + axis)];
            d.dofs[size_t(3 + axis)] = system.dof_map[size_t(3 * pos.at(hi) + axis)];
        }
        out.elements.push_back(d);
    }
    return out;
}

SolvedModel analyze(const TrussModel& model, double zero_tol, double cluster_tol) {
    SolvedModel s;
    s.model = model;
    s.system = assemble(model);
    s.spectrum = solve(s.system, zero_tol);
    s.retained = nonzero_spectrum(s.spectrum, zero_tol);
    s.clusters = cluster(s.retained, cluster_tol);
    s.derivatives = matrix_derivatives(model, s.system);
    return s;
}

double element_sensitivity(const Spectrum& spectrum, const MatrixDerivatives& derivs, int full_q,
                           int element_pos) {
    if (full_q < 0 || full_q >= spectrum.size()) throw std::out_of_range("eigen index out of range");
    const ElementDerivative& d = derivs.elements[static_cast<size_t>(element_pos)];
    Eigen::Matrix<double, 6, 1> phi;
    for (int a = 0; a < 6; ++a) {
        const int dof = d.dofs[size_t(a)];
        phi(a) = dof >= 0 ? spectrum.eigenvectors(dof, full_q) : 0.0;
    }
    const double lambda = spectrum.eigenvalues(full_q);
    return phi.dot(d.stiffness * phi) - lambda * phi.dot(d.mass * phi);
}

namespace {

std::vector<int> group_element_positions(const TrussModel& model, int group_id) {
    model.group_index(group_id);  // validates the id
    std::vector<int> out;
    for (size_t i = 0; i < model.elements.size(); ++i) {
        if (model.elements[i].group == group_id) out.push_back(static_cast<int>(i));
    }
    return out;
}

double group_sensitivity_full(const SolvedModel& s, int full_q, int group_id) {
    double total = 0.0;
    for (int e : group_element_positions(s.model, group_id)) {
        total += element_sensitivity(s.spectrum, s.derivatives, full_q, e);
    }
    return total;
}

}  // namespace

double eig_sensitivity(const SolvedModel& solved, int retained_q, int group_id) {
    if (retained_q < 0 || retained_q >= solved.retained.size()) {
        throw std::out_of_range("retained eigen index out of range");
    }
    return group_sensitivity_full(solved, solved.retained.full_index(retained_q), group_id);
}

double cluster_mean_sensitivity(const SolvedModel& solved, int cluster_q, int group_id) {
    if (cluster_q < 0 || cluster_q >= solved.clusters.count()) {
        throw std::out_of_range("cluster index out of range");
    }
    const Cluster& c = solved.clusters[cluster_q];
    double total = 0.0;
    for (int k = c.start; k < c.start + c.count; ++k) {
        total += group_sensitivity_full(solved, solved.retained.full_index(k), group_id);
    }
    return total / c.count;
}

double pnorm(const Eigen::VectorXd& values, double p) {
    if (values.size() == 0) throw std::invalid_argument("p-norm of an empty list");
    if (p < 1.0) throw std::invalid_argument("p-norm requires p >= 1");
    if ((values.array() <= 0.0).any()) {
        throw std::domain_error("p-norm aggregate requires positive eigenvalues");
    }
    // Factor out the maximum to keep powers in range.
    const double vmax = values.maxCoeff();
    const double sum = (values.array() / vmax).pow(p).sum();
    return vmax * std::pow(sum, 1.0 / p);
}

double ks(const Eigen::VectorXd& values, double q) {
    if (values.size() == 0) throw std::invalid_argument("KS of an empty list");
    if (q <= 0.0) throw std::invalid_argument("KS requires q > 0");
    const double vmax = values.maxCoeff();
    const double sum = ((values.array() - vmax) * q).exp().sum();
    return vmax + std::log(sum) / q;
}

namespace {

Eigen::VectorXd leading(const SolvedModel& s, int n) {
    if (n < 1 || n > s.retained.size()) throw std::out_of_range("truncation count out of range");
    return s.retained.values.head(n);
}

}  // namespace

double pnorm_gradient(const SolvedModel& solved, int n, double p, int group_id) {
    const Eigen::VectorXd head = leading(solved, n);
    const double star = pnorm(head, p);
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = std::pow(head(k) / star, p - 1.0);
        total += w * eig_sensitivity(solved, k, group_id);
    }
    return total;
}

double ks_gradient(const SolvedModel& solved, int n, double q, int group_id) {
    const Eigen::VectorXd head = leading(solved, n);
    const double vmax = head.maxCoeff();
    const Eigen::ArrayXd w = ((head.array() - vmax) * q).exp();
    const double wsum = w.sum();
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        total += (w(k) / wsum) * eig_sensitivity(solved, k, group_id);
    }
    return total;
}

namespace {

void require_complete(const ClusterSet& set, const std::vector<int>& indices, int truncation) {
    const int limit = truncation < 0 ? static_cast<int>(set.retained.size()) : truncation;
    for (int q : indices) {
        if (q < 0 || q >= set.count()) throw std::out_of_range("cluster index out of range");
        const Cluster& c = set[q];
        if (c.start + c.count > limit) {
            throw IncompleteClusterError("cluster " + std::to_string(q + 1) +
                                         " is incomplete under the requested truncation");
        }
    }
}

Eigen::VectorXd selected_means(const ClusterSet& set, const std::vector<int>& indices) {
    Eigen::VectorXd m(static_cast<Eigen::Index>(indices.size()));
    for (size_t i = 0; i < indices.size(); ++i) m(static_cast<Eigen::Index>(i)) = set[indices[i]].mean;
    return m;
}

}  // namespace

double cluster_function_value(const SolvedModel& solved, const ClusterFunction& f, int truncation) {
    require_complete(solved.clusters, f.cluster_indices, truncation);
    return f.value(selected_means(solved.clusters, f.cluster_indices));
}

double cluster_function_sensitivity(const SolvedModel& solved, const ClusterFunction& f, int group_id,
                                    int truncation) {
    require_complete(solved.clusters, f.cluster_indices, truncation);
    const Eigen::VectorXd means = selected_means(solved.clusters, f.cluster_indices);
    const Eigen::VectorXd grad = f.gradient(means);
    if (grad.size() != means.size()) throw std::invalid_argument("cluster function gradient size mismatch");
    double total = 0.0;
    for (size_t i = 0; i < f.cluster_indices.size(); ++i) {
        total += grad(static_cast<Eigen::Index>(i)) *
                 cluster_mean_sensitivity(solved, f.cluster_indices[i], group_id);
    }
    return total;
}

DemoPolynomials demo_polynomials(double l1, double l2, double l3) {
    DemoPolynomials r;
    r.g = l1 * l1 * l2 * l3 + l2 * l2 * l3 * l1 + l3 * l3 * l1 * l2;
    r.h = l1 * l1 * l2 * l3 + l2 * l2 * l3 * l1 + l3 * l3 * l1;
    r.dg = Eigen::Vector3d(2.0 * l1 * l2 * l3 + l2 * l2 * l3 + l3 * l3 * l2,
                           l1 * l1 * l3 + 2.0 * l2 * l3 * l1 + l3 * l3 * l1,
                           l1 * l1 * l2 + l2 * l2 * l1 + 2.0 * l3 * l1 * l2);
    r.dh = Eigen::Vector3d(2.0 * l1 * l2 * l3 + l2 * l2 * l3 + l3 * l3,
                           l1 * l1 * l3 + 2.0 * l2 * l3 * l1,
                           l1 * l1 * l2 + l2 * l2 * l1 + 2.0 * l3 * l1);
    return r;
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
    if (h <= 0.0) throw std::invalid_argument("CDM step must be positive");
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace {

TrussModel with_group_area(const TrussModel& model, int group_id, double area) {
    TrussModel m = model;
    m.groups[static_cast<size_t>(m.group_index(group_id))].area = area;
    return m;
}

}  // namespace

double cdm_sensitivity(const TrussModel& model, const QuantityEvaluator& quantity, int group_id,
                       double h, double zero_tol) {
    const int gi = model.group_index(group_id);
    const double x0 = model.groups[static_cast<size_t>(gi)].area;
    if (x0 - h <= 0.0) throw std::invalid_argument("CDM step would make the group area non-positive");
    auto evaluate = [&](double x) {
        const TrussModel m = with_group_area(model, group_id, x);
        const AssembledSystem sys = assemble(m);
        const Spectrum spec = solve(sys, zero_tol);
        return quantity(nonzero_spectrum(spec, zero_tol).values);
    };
    return central_difference(evaluate, x0, h);
}

Quantity eigenvalue_quantity(const SolvedModel& base, int retained_q) {
    if (retained_q < 0 || retained_q >= base.retained.size()) {
        throw std::out_of_range("retained eigen index out of range");
    }
    const SolvedModel* b = &base;
    Quantity q;
    q.label = "lambda_" + std::to_string(retained_q + 1);
    q.value = [retained_q](const Eigen::VectorXd& lam) { return lam(retained_q); };
    q.analytical = [b, retained_q](int group_id) { return eig_sensitivity(*b, retained_q, group_id); };
    return q;
}

Quantity cluster_mean_quantity(const SolvedModel& base, int cluster_q) {
    if (cluster_q < 0 || cluster_q >= base.clusters.count()) {
        throw std::out_of_range("cluster index out of range");
    }
    const SolvedModel* b = &base;
    const Cluster c = base.clusters[cluster_q];  // positional range frozen at the base point
    Quantity q;
    q.label = "mean_L" + std::to_string(cluster_q + 1);
    q.value = [c](const Eigen::VectorXd& lam) { return lam.segment(c.start, c.count).mean(); };
    q.analytical = [b, cluster_q](int group_id) { return cluster_mean_sensitivity(*b, cluster_q, group_id); };
    return q;
}

Quantity pnorm_quantity(const SolvedModel& base, int n, double p) {
    leading(base, n);  // validates n
    const SolvedModel* b = &base;
    Quantity q;
    q.label = "pnorm_n" + std::to_string(n) + "_p" + std::to_string(static_cast<int>(p));
    q.value = [n, p](const Eigen::VectorXd& lam) { return pnorm(lam.head(n), p); };
    q.analytical = [b, n, p](int group_id) { return pnorm_gradient(*b, n, p, group_id); };
    return q;
}

Quantity ks_quantity(const SolvedModel& base, int n, double qks) {
    leading(base, n);
    const SolvedModel* b = &base;
    Quantity q;
    q.label = "ks_n" + std::to_string(n) + "_q" + std::to_string(static_cast<int>(qks));
    q.value = [n, qks](const Eigen::VectorXd& lam) { return ks(lam.head(n), qks); };
    q.analytical = [b, n, qks](int group_id) { return ks_gradient(*b, n, qks, group_id); };
    return q;
}

Quantity cluster_function_quantity(const SolvedModel& base, ClusterFunction f, int truncation) {
    require_complete(base.clusters, f.cluster_indices, truncation);
    const SolvedModel* b = &base;
    // Positional member ranges frozen at the base point.
    std::vector<Cluster> ranges;
    for (int ci : f.cluster_indices) ranges.push_back(base.clusters[ci]);
    Quantity q;
    q.label = f.label.empty() ? "cluster_function" : f.label;
    auto fval = f.value;
    q.value = [ranges, fval](const Eigen::VectorXd& lam) {
        Eigen::VectorXd means(static_cast<Eigen::Index>(ranges.size()));
        for (size_t i = 0; i < ranges.size(); ++i) {
            means(static_cast<Eigen::Index>(i)) = lam.segment(ranges[i].start, ranges[i].count).mean();
        }
        return fval(means);
    };
    q.analytical = [b, f, truncation](int group_id) {
        return cluster_function_sensitivity(*b, f, group_id, truncation);
    };
    return q;
}

Quantity demo_polynomial_quantity(const SolvedModel& base, int cluster_q, bool symmetric) {
    if (cluster_q < 0 || cluster_q >= base.clusters.count()) {
        throw std::out_of_range("cluster index out of range");
    }
    const Cluster c = base.clusters[cluster_q];
    if (c.count != 3) throw std::invalid_argument("demonstration polynomials need a 3-member cluster");
    const SolvedModel* b = &base;
    Quantity q;
    q.label = symmetric ? "poly_g" : "poly_h";
    const int start = c.start;
    q.value = [start, symmetric](const Eigen::VectorXd& lam) {
        const DemoPolynomials r = demo_polynomials(lam(start), lam(start + 1), lam(start + 2));
        return symmetric ? r.g : r.h;
    };
    q.analytical = [b, start, symmetric](int group_id) {
        const Eigen::VectorXd& lam = b->retained.values;
        const DemoPolynomials r = demo_polynomials(lam(start), lam(start + 1), lam(start + 2));
        const Eigen::Vector3d& grad = symmetric ? r.dg : r.dh;
        double total = 0.0;
        for (int k = 0; k < 3; ++k) {
            total += grad(k) * eig_sensitivity(*b, start + k, group_id);
        }
        return total;
    };
    return q;
}

AuditReport audit(const SolvedModel& base, const std::vector<Quantity>& quantities,
                  std::vector<int> group_ids, MatchTolerance tol, double cdm_step, double zero_tol) {
    if (group_ids.empty()) {
        for (const DesignGroup& g : base.model.groups) group_ids.push_back(g.id);
    }
    AuditReport report;
    for (const Quantity& q : quantities) {
        QuantityVerdict verdict;
        verdict.quantity = q.label;
        const double q0 = q.value(base.retained.values);
        for (int gid : group_ids) {
            SensitivityRow row;
            row.quantity = q.label;
            row.variable = base.model.groups[static_cast<size_t>(base.model.group_index(gid))].label;
            row.analytical = q.analytical(gid);
            row.cdm = cdm_sensitivity(base.model, q.value, gid, cdm_step, zero_tol);
            row.matches = sensitivities_match(row.analytical, row.cdm, tol, q0, cdm_step);
            if (!row.matches) {
                verdict.differentiable = false;
                verdict.offending_rows.push_back(static_cast<int>(report.rows.size()));
            }
            report.rows.push_back(row);
        }
        report.verdicts.push_back(verdict);
    }
    return report;
}

std::vector<bool> invariant_clusters(const SolvedModel& solved, double tol) {
    std::vector<bool> flags(static_cast<size_t>(solved.clusters.count()), false);
    for (int q = 0; q < solved.clusters.count(); ++q) {
        double worst = 0.0;
        for (const DesignGroup& g : solved.model.groups) {
            worst = std::max(worst, std::abs(cluster_mean_sensitivity(solved, q, g.id)));
        }
        const double scale = std::max(1.0, std::abs(solved.clusters[q].mean));
        flags[static_cast<size_t>(q)] = worst <= tol * scale;
    }
    return flags;
}

}  // namespace symeig
