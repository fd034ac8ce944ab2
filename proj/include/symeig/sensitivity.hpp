#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "symeig/clusters.hpp"
#include "symeig/eigensolver.hpp"
#include "symeig/model.hpp"

namespace symeig {

struct IncompleteClusterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultCdmStep = 1e-6;

// Scattered per-element derivative blocks. Element matrices are linear in the
// area, so dK/dx_e is the element's global stiffness at unit area (same for M).
struct ElementDerivative {
    std::array<int, 6> dofs{};                // free dof indices, -1 for fixed
    Eigen::Matrix<double, 6, 6> stiffness;    // dK/dx_e
    Eigen::Matrix<double, 6, 6> mass;         // dM/dx_e
};

struct MatrixDerivatives {
    std::vector<ElementDerivative> elements;  // by position in model.elements
};

MatrixDerivatives matrix_derivatives(const TrussModel& model, const AssembledSystem& system);

// Everything downstream audits need about one solved design point.
struct SolvedModel {
    TrussModel model;
    AssembledSystem system;
    Spectrum spectrum;
    RetainedSpectrum retained;
    ClusterSet clusters;
    MatrixDerivatives derivatives;

    double retained_value(int q) const { return retained.values(q); }
};

SolvedModel analyze(const TrussModel& model, double zero_tol = kDefaultZeroTol,
                    double cluster_tol = kDefaultClusterTol);

// phi_q^T (dK/dx_e - lambda_q dM/dx_e) phi_q for one element, full-spectrum index q.
double element_sensitivity(const Spectrum& spectrum, const MatrixDerivatives& derivs, int full_q,
                           int element_pos);

// Group (symmetric-variable) sensitivity of retained eigenvalue q: the sum of
// member-element quasi-derivatives. For a repeated eigenvalue this value
// depends on the solver's eigenvector basis; judging it is the audit's job.
double eig_sensitivity(const SolvedModel& solved, int retained_q, int group_id);

// Basis-invariant derivative of the cluster mean (a trace over the cluster).
double cluster_mean_sensitivity(const SolvedModel& solved, int cluster_q, int group_id);

// Smooth-maximum aggregates over the first n retained eigenvalues.
double pnorm(const Eigen::VectorXd& values, double p);
double ks(const Eigen::VectorXd& values, double q);
double pnorm_gradient(const SolvedModel& solved, int n, double p, int group_id);
double ks_gradient(const SolvedModel& solved, int n, double q, int group_id);

// Smooth function of selected cluster means together with its gradient.
struct ClusterFunction {
    std::string label;
    std::vector<int> cluster_indices;  // 0-based positions in the ClusterSet
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

// Refuses (IncompleteClusterError) if a referenced cluster is cut by the
// truncation; truncation < 0 means the whole retained spectrum.
double cluster_function_value(const SolvedModel& solved, const ClusterFunction& f, int truncation = -1);
double cluster_function_sensitivity(const SolvedModel& solved, const ClusterFunction& f, int group_id,
                                    int truncation = -1);

// The g/h demonstration polynomials on a 3-member cluster:
//   g = l1^2 l2 l3 + l2^2 l3 l1 + l3^2 l1 l2   (symmetric)
//   h = l1^2 l2 l3 + l2^2 l3 l1 + l3^2 l1      (asymmetric)
struct DemoPolynomials {
    double g = 0.0;
    double h = 0.0;
    Eigen::Vector3d dg = Eigen::Vector3d::Zero();  // d/d(l1,l2,l3)
    Eigen::Vector3d dh = Eigen::Vector3d::Zero();
};
DemoPolynomials demo_polynomials(double l1, double l2, double l3);

// Plain second-order central-difference stencil.
double central_difference(const std::function<double(double)>& f, double x, double h);

// Any scalar quantity of the sorted retained eigenvalues, evaluated at a
// perturbed design by re-assembly and re-solution (sorted-index pairing).
using QuantityEvaluator = std::function<double(const Eigen::VectorXd& retained)>;

double cdm_sensitivity(const TrussModel& model, const QuantityEvaluator& quantity, int group_id,
                       double h = kDefaultCdmStep, double zero_tol = kDefaultZeroTol);

// One audited quantity: a positional evaluator for the CDM side plus the
// analytical derivative evaluated on the base design's eigenbasis.
struct Quantity {
    std::string label;
    QuantityEvaluator value;
    std::function<double(int group_id)> analytical;
};

Quantity eigenvalue_quantity(const SolvedModel& base, int retained_q);
Quantity cluster_mean_quantity(const SolvedModel& base, int cluster_q);
Quantity pnorm_quantity(const SolvedModel& base, int n, double p);
Quantity ks_quantity(const SolvedModel& base, int n, double q);
Quantity cluster_function_quantity(const SolvedModel& base, ClusterFunction f, int truncation = -1);
// symmetric ? g : h over the three members of cluster_q (must have N_q = 3)
Quantity demo_polynomial_quantity(const SolvedModel& base, int cluster_q, bool symmetric);

struct MatchTolerance {
    double rtol = 1e-4;
    double atol = 1e-8;
};

inline bool sensitivities_match(double analytical, double cdm, const MatchTolerance& tol) {
    return std::abs(analytical - cdm) <= tol.atol + tol.rtol * std::max(std::abs(analytical), std::abs(cdm));
}

// The stencil cannot resolve derivatives below eps * |Q| / h, so a quantity
// with magnitude |Q| gets that much extra absolute slack. Without it a
// zero-derivative (invariant) quantity would be flagged as a mismatch on pure
// round-off.
inline double cdm_noise_floor(double quantity_value, double h) {
    return 8.0 * std::numeric_limits<double>::epsilon() * std::abs(quantity_value) / h;
}

inline bool sensitivities_match(double analytical, double cdm, const MatchTolerance& tol,
                                double quantity_value, double h) {
    return std::abs(analytical - cdm) <= tol.atol + cdm_noise_floor(quantity_value, h) +
                                             tol.rtol * std::max(std::abs(analytical), std::abs(cdm));
}

struct SensitivityRow {
    std::string quantity;
    std::string variable;
    double analytical = 0.0;
    double cdm = 0.0;
    bool matches = false;
};

struct QuantityVerdict {
    std::string quantity;
    bool differentiable = true;          // all rows match
    std::vector<int> offending_rows;     // indices into AuditReport::rows
};

struct AuditReport {
    std::vector<SensitivityRow> rows;
    std::vector<QuantityVerdict> verdicts;
};

// Runs the CDM-vs-analytical check for every (quantity, group) pair.
// group_ids empty means all groups in the model's partition order.
AuditReport audit(const SolvedModel& base, const std::vector<Quantity>& quantities,
                  std::vector<int> group_ids = {}, MatchTolerance tol = {},
                  double cdm_step = kDefaultCdmStep, double zero_tol = kDefaultZeroTol);

// Cluster q is invariant iff every group's cluster-mean sensitivity vanishes
// within tol * max(1, |mean|).
std::vector<bool> invariant_clusters(const SolvedModel& solved, double tol = 1e-8);

}  // namespace symeig
