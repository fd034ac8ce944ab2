#include "symeig/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace symeig {

Eigen::VectorXd Spectrum::frequencies() const {
    return eigenvalues.cwiseMax(0.0).cwiseSqrt();
}

namespace {

int count_zero_modes(const Eigen::VectorXd& lambda, double zero_tol) {
    if (lambda.size() == 0) return 0;
    const double lambda_max = lambda(lambda.size() - 1);
    if (lambda_max <= 0.0) return static_cast<int>(lambda.size());
    const double cutoff = zero_tol * lambda_max;
    int n = 0;
    while (n < lambda.size() && lambda(n) < cutoff) ++n;
    return n;
}

}  // namespace

Spectrum solve(const AssembledSystem& system, double zero_tol) {
    if (system.free_dofs <= 0) throw std::invalid_argument("system has no free dofs");
    if (zero_tol < 0.0) throw std::invalid_argument("zero tolerance must be non-negative");

    // M must factor; a failed LLT means some free dof carries no inertia.
    Eigen::LLT<Eigen::MatrixXd> llt(system.mass);
    if (llt.info() != Eigen::Success) {
        throw IndefiniteMassError("mass matrix is not positive definite (invalid model)");
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        system.stiffness, system.mass, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success) {
        throw IndefiniteMassError("generalized eigensolve failed");
    }

    Spectrum s;
    s.eigenvalues = solver.eigenvalues();
    s.eigenvectors = solver.eigenvectors();  // already M-orthonormal
    s.zero_count = count_zero_modes(s.eigenvalues, zero_tol);
    return s;
}

RetainedSpectrum nonzero_spectrum(const Spectrum& spectrum, double zero_tol) {
    if (zero_tol < 0.0) throw std::invalid_argument("zero tolerance must be non-negative");
    const int n = spectrum.size();
    const int dropped = count_zero_modes(spectrum.eigenvalues, zero_tol);
    if (dropped == n) {
        throw DegenerateSpectrumError("all eigenvalues fall below the zero tolerance");
    }
    RetainedSpectrum r;
    r.dropped = dropped;
    r.values = spectrum.eigenvalues.segment(dropped, n - dropped);
    return r;
}

ResidualReport verify(const Spectrum& spectrum, const AssembledSystem& system) {
    const int n = spectrum.size();
    if (n != system.free_dofs || spectrum.eigenvectors.rows() != n) {
        throw std::invalid_argument("spectrum/system dimensions disagree");
    }
    const Eigen::MatrixXd& k = system.stiffness;
    const Eigen::MatrixXd& m = system.mass;
    const Eigen::MatrixXd& phi = spectrum.eigenvectors;
    const double k_scale = k.norm();

    ResidualReport rep;
    for (int q = 0; q < n; ++q) {
        const double res = (k * phi.col(q) - spectrum.eigenvalues(q) * (m * phi.col(q))).norm();
        rep.max_residual = std::max(rep.max_residual, res / k_scale);
    }
    const Eigen::MatrixXd gram = phi.transpose() * m * phi;
    rep.max_m_defect = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    Eigen::MatrixXd kdiag = phi.transpose() * k * phi;
    kdiag.diagonal() -= spectrum.eigenvalues;
    rep.max_k_defect = kdiag.cwiseAbs().maxCoeff() / k_scale;
    return rep;
}

}  // namespace symeig
