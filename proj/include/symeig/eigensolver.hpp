#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "symeig/model.hpp"

namespace symeig {

// Raised when the mass matrix admits no Cholesky factorization, i.e. the
// model leaves some free dof without inertia (indefinite or singular M).
struct IndefiniteMassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultZeroTol = 1e-9;  // relative to lambda_max

// Full solution of K phi = lambda M phi with M-orthonormal eigenvectors.
struct Spectrum {
    Eigen::VectorXd eigenvalues;   // ascending, length n_f
    Eigen::MatrixXd eigenvectors;  // column q pairs with eigenvalues[q]
    int zero_count = 0;            // leading eigenvalues below the zero tolerance

    int size() const { return static_cast<int>(eigenvalues.size()); }
    // Eigenfrequencies omega_q = sqrt(max(lambda_q, 0)); negative round-off is
    // clamped here only, never in the stored eigenvalues.
    Eigen::VectorXd frequencies() const;
};

// View of the spectrum with the rigid-body/mechanism zeros dropped.
struct RetainedSpectrum {
    int dropped = 0;  // leading eigenvalues below tolerance
    Eigen::VectorXd values;

    int size() const { return static_cast<int>(values.size()); }
    // Index of retained eigenvalue q (0-based) in the full spectrum.
    int full_index(int q) const { return dropped + q; }
};

Spectrum solve(const AssembledSystem& system, double zero_tol = kDefaultZeroTol);

RetainedSpectrum nonzero_spectrum(const Spectrum& spectrum, double zero_tol = kDefaultZeroTol);

struct ResidualReport {
    double max_residual = 0.0;        // max_q ||K phi_q - lambda_q M phi_q|| / ||K||_F
    double max_m_defect = 0.0;        // max |Phi^T M Phi - I|
    double max_k_defect = 0.0;        // max |Phi^T K Phi - diag(lambda)| / ||K||_F
};

ResidualReport verify(const Spectrum& spectrum, const AssembledSystem& system);

}  // namespace symeig
