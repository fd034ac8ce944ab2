#pragma once

#include <string>
#include <vector>

#include "symeig/clusters.hpp"
#include "symeig/sensitivity.hpp"

namespace symeig {

enum class ReportFormat { text, csv, json };

ReportFormat parse_format(const std::string& name);

// Retained eigenvalues at 3 decimals with cluster and invariance annotations.
std::string spectrum_report(const SolvedModel& solved, const std::vector<bool>& invariant,
                            ReportFormat format);

// CDM | Analytical pairs at 6 decimals, one block per quantity.
std::string audit_report_text(const AuditReport& report, ReportFormat format);

// Eigenvalues at full precision (optionally with eigenvectors) for tooling.
std::string spectrum_json(const Spectrum& spectrum, bool include_vectors);

std::string orbit_report(const std::vector<std::vector<int>>& node_orbits,
                         const std::vector<std::vector<int>>& element_orbits, ReportFormat format);

}  // namespace symeig
