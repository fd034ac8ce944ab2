#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "symeig/eigensolver.hpp"

namespace symeig {

inline constexpr double kDefaultClusterTol = 1e-6;
inline constexpr double kClusterScaleFloor = 1.0;

// Contiguous run of numerically repeated eigenvalues in the retained spectrum.
struct Cluster {
    int start = 0;         // 0-based position in the retained list
    int count = 0;         // multiplicity N_q
    double mean = 0.0;     // arithmetic mean of the members
};

struct ClusterSet {
    std::vector<Cluster> clusters;
    Eigen::VectorXd retained;  // the eigenvalues that were clustered
    int dropped = 0;           // zero modes preceding them in the full spectrum

    int count() const { return static_cast<int>(clusters.size()); }
    // Members of cluster q as 0-based retained indices [start, start+count).
    const Cluster& operator[](int q) const { return clusters[static_cast<size_t>(q)]; }
};

// Greedy left-to-right chaining: an eigenvalue joins the running cluster iff
// its gap to the previous one is within rel_tol * max(|value|, scale_floor).
ClusterSet cluster(const Eigen::VectorXd& ascending, double rel_tol = kDefaultClusterTol,
                   double scale_floor = kClusterScaleFloor, int dropped = 0);

ClusterSet cluster(const RetainedSpectrum& retained, double rel_tol = kDefaultClusterTol,
                   double scale_floor = kClusterScaleFloor);

double cluster_mean(const ClusterSet& set, int q);

struct CompletenessCheck {
    bool complete = true;
    int cut_cluster = -1;   // 0-based cluster index the truncation bisects
    int cut_position = -1;  // 0-based retained index where the cut lands
};

// Whether keeping the first n retained eigenvalues cuts through a cluster.
CompletenessCheck completeness(const ClusterSet& set, int n);

// Multiplicity signature (N_1, ..., N_{n_c}), handy for table comparisons.
std::vector<int> multiplicities(const ClusterSet& set);

std::string brace_notation(const ClusterSet& set);

}  // namespace symeig
