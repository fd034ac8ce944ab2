#pragma once

// Test-only brute-force oracle: eigenvalues of the pencil (K, M) as the roots
// of det(K - lambda M), expanded over permutations. Only sensible for n <= 4.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <vector>

namespace symeig::testing {

// Polynomial coefficients, ascending powers.
using Poly = std::vector<double>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

inline Eigen::VectorXd det_pencil_roots(const Eigen::MatrixXd& k, const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(k.rows());
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);

    Poly det(static_cast<size_t>(n) + 1, 0.0);
    do {
        // permutation sign by counting inversions
        int inversions = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (perm[size_t(i)] > perm[size_t(j)]) ++inversions;
            }
        }
        Poly term{inversions % 2 == 0 ? 1.0 : -1.0};
        for (int i = 0; i < n; ++i) {
            term = poly_mul(term, Poly{k(i, perm[size_t(i)]), -m(i, perm[size_t(i)])});
        }
        for (size_t c = 0; c < term.size(); ++c) det[c] += term[c];
    } while (std::next_permutation(perm.begin(), perm.end()));

    // companion matrix of the monic polynomial
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -det[size_t(i)] / det[size_t(n)];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    Eigen::VectorXd roots = es.eigenvalues().real();
    std::sort(roots.data(), roots.data() + roots.size());
    return roots;
}

}  // namespace symeig::testing
