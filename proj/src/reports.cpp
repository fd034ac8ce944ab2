#include "symeig/reports.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace symeig {

using nlohmann::json;

ReportFormat parse_format(const std::string& name) {
    if (name == "text") return ReportFormat::text;
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown format: " + name);
}

std::string spectrum_report(const SolvedModel& solved, const std::vector<bool>& invariant,
                            ReportFormat format) {
    const ClusterSet& cs = solved.clusters;
    std::ostringstream os;

    if (format == ReportFormat::json) {
        json j;
        j["zero_modes"] = solved.retained.dropped;
        j["retained"] = std::vector<double>(cs.retained.data(), cs.retained.data() + cs.retained.size());
        j["clusters"] = json::array();
        for (int q = 0; q < cs.count(); ++q) {
            json c;
            c["index"] = q + 1;
            c["first"] = cs[q].start + 1;
            c["multiplicity"] = cs[q].count;
            c["mean"] = cs[q].mean;
            if (!invariant.empty()) c["invariant"] = static_cast<bool>(invariant[size_t(q)]);
            j["clusters"].push_back(c);
        }
        return j.dump(2) + "\n";
    }

    if (format == ReportFormat::csv) {
        os << "q,lambda,cluster,multiplicity,invariant\n";
        for (int q = 0; q < cs.count(); ++q) {
            for (int k = cs[q].start; k < cs[q].start + cs[q].count; ++k) {
                os << (k + 1) << ',' << std::fixed << std::setprecision(3) << cs.retained(k) << ','
                   << (q + 1) << ',' << cs[q].count << ','
                   << (!invariant.empty() && invariant[size_t(q)] ? 1 : 0) << '\n';
            }
        }
        return os.str();
    }

    os << "zero modes dropped: " << solved.retained.dropped << "\n";
    os << "retained eigenvalues: " << cs.retained.size() << ", clusters: " << cs.count() << "\n\n";
    os << std::fixed << std::setprecision(3);
    os << "   q      lambda   cluster  mult\n";
    for (int q = 0; q < cs.count(); ++q) {
        for (int k = cs[q].start; k < cs[q].start + cs[q].count; ++k) {
            os << std::setw(4) << (k + 1) << std::setw(12) << cs.retained(k) << std::setw(10)
               << ("L" + std::to_string(q + 1)) << std::setw(6) << cs[q].count;
            if (!invariant.empty() && invariant[size_t(q)]) os << "  invariant";
            os << '\n';
        }
    }
    os << '\n' << brace_notation(cs) << '\n';
    return os.str();
}

std::string audit_report_text(const AuditReport& report, ReportFormat format) {
    std::ostringstream os;

    if (format == ReportFormat::json) {
        json j;
        j["rows"] = json::array();
        for (const SensitivityRow& r : report.rows) {
            j["rows"].push_back({{"quantity", r.quantity},
                                 {"variable", r.variable},
                                 {"cdm", r.cdm},
                                 {"analytical", r.analytical},
                                 {"matches", r.matches}});
        }
        j["verdicts"] = json::array();
        for (const QuantityVerdict& v : report.verdicts) {
            j["verdicts"].push_back({{"quantity", v.quantity}, {"differentiable", v.differentiable}});
        }
        return j.dump(2) + "\n";
    }

    if (format == ReportFormat::csv) {
        os << "quantity,variable,cdm,analytical,matches\n";
        os << std::setprecision(12);
        for (const SensitivityRow& r : report.rows) {
            os << r.quantity << ',' << r.variable << ',' << r.cdm << ',' << r.analytical << ','
               << (r.matches ? 1 : 0) << '\n';
        }
        return os.str();
    }

    std::string current;
    os << std::fixed << std::setprecision(6);
    for (const SensitivityRow& r : report.rows) {
        if (r.quantity != current) {
            current = r.quantity;
            os << "d(" << current << ")/dx_sym\n";
            os << "  variable          CDM     Analytical\n";
        }
        os << "  " << std::left << std::setw(10) << r.variable << std::right << std::setw(13) << r.cdm
           << std::setw(13) << r.analytical << (r.matches ? "" : "   MISMATCH") << '\n';
    }
    os << '\n';
    for (const QuantityVerdict& v : report.verdicts) {
        os << v.quantity << ": " << (v.differentiable ? "differentiable" : "NOT differentiable") << '\n';
    }
    return os.str();
}

std::string spectrum_json(const Spectrum& spectrum, bool include_vectors) {
    json j;
    j["zero_count"] = spectrum.zero_count;
    j["eigenvalues"] =
        std::vector<double>(spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + spectrum.size());
    if (include_vectors) {
        json vecs = json::array();
        for (int q = 0; q < spectrum.size(); ++q) {
            vecs.push_back(std::vector<double>(spectrum.eigenvectors.col(q).data(),
                                               spectrum.eigenvectors.col(q).data() + spectrum.size()));
        }
        j["eigenvectors"] = vecs;
    }
    return j.dump(2) + "\n";
}

std::string orbit_report(const std::vector<std::vector<int>>& node_orbits,
                         const std::vector<std::vector<int>>& element_orbits, ReportFormat format) {
    if (format == ReportFormat::json) {
        json j;
        j["node_orbits"] = node_orbits;
        j["element_orbits"] = element_orbits;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    auto dump = [&os](const char* title, const std::vector<std::vector<int>>& orbits) {
        os << title << " (" << orbits.size() << "):\n";
        for (size_t i = 0; i < orbits.size(); ++i) {
            os << "  orbit " << (i + 1) << " [" << orbits[i].size() << "]:";
            for (int id : orbits[i]) os << ' ' << id;
            os << '\n';
        }
    };
    dump("node orbits", node_orbits);
    dump("element orbits", element_orbits);
    return os.str();
}

}  // namespace symeig
