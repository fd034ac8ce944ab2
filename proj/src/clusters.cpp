#include "symeig/clusters.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace symeig {

ClusterSet cluster(const Eigen::VectorXd& ascending, double rel_tol, double scale_floor, int dropped) {
    if (ascending.size() == 0) throw std::invalid_argument("cannot cluster an empty spectrum");
    if (rel_tol <= 0.0) throw std::invalid_argument("cluster tolerance must be positive");
    for (int i = 1; i < ascending.size(); ++i) {
        if (ascending(i) < ascending(i - 1)) throw std::invalid_argument("eigenvalues must be ascending");
    }

    ClusterSet set;
    set.retained = ascending;
    set.dropped = dropped;

    Cluster cur{0, 1, 0.0};
    for (int i = 1; i < ascending.size(); ++i) {
        const double gap = ascending(i) - ascending(i - 1);
        const double scale = std::max(std::abs(ascending(i)), scale_floor);
        if (gap <= rel_tol * scale) {
            ++cur.count;
        } else {
            set.clusters.push_back(cur);
            cur = Cluster{i, 1, 0.0};
        }
    }
    set.clusters.push_back(cur);
    for (Cluster& c : set.clusters) {
        c.mean = ascending.segment(c.start, c.count).mean();
    }
    return set;
}

ClusterSet cluster(const RetainedSpectrum& retained, double rel_tol, double scale_floor) {
    return cluster(retained.values, rel_tol, scale_floor, retained.dropped);
}

double cluster_mean(const ClusterSet& set, int q) {
    if (q < 0 || q >= set.count()) throw std::out_of_range("cluster index out of range");
    return set.clusters[static_cast<size_t>(q)].mean;
}

CompletenessCheck completeness(const ClusterSet& set, int n) {
    if (n < 1 || n > set.retained.size()) throw std::out_of_range("truncation count out of range");
    CompletenessCheck check;
    for (size_t q = 0; q < set.clusters.size(); ++q) {
        const Cluster& c = set.clusters[q];
        if (n > c.start && n < c.start + c.count) {
            check.complete = false;
            check.cut_cluster = static_cast<int>(q);
            check.cut_position = n;
            break;
        }
    }
    return check;
}

std::vector<int> multiplicities(const ClusterSet& set) {
    std::vector<int> m;
    m.reserve(set.clusters.size());
    for (const Cluster& c : set.clusters) m.push_back(c.count);
    return m;
}

std::string brace_notation(const ClusterSet& set) {
    std::ostringstream os;
    for (size_t q = 0; q < set.clusters.size(); ++q) {
        const Cluster& c = set.clusters[q];
        if (q) os << " < ";
        os << "L" << (q + 1) << "{";
        if (c.count == 1) {
            os << "lam_" << (c.start + 1);
        } else {
            os << "lam_" << (c.start + 1) << "..lam_" << (c.start + c.count);
        }
        os << "}";
    }
    return os.str();
}

}  // namespace symeig
