#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "symeig/families.hpp"
#include "symeig/pointgroup.hpp"
#include "symeig/reports.hpp"
#include "symeig/reproduce.hpp"
#include "symeig/sensitivity.hpp"

namespace {

using namespace symeig;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitMismatch = 3;

#ifndef SYMEIG_DATA_DIR
#define SYMEIG_DATA_DIR "."
#endif
#ifndef SYMEIG_PRESET_DIR
#define SYMEIG_PRESET_DIR "."
#endif

std::string data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SYMSPEC_DATA_DIR")) return env;
    return SYMEIG_DATA_DIR;
}

std::string preset_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SYMSPEC_PRESET_DIR")) return env;
    return SYMEIG_PRESET_DIR;
}

// Loads a model from an explicit file, a preset file in the preset directory,
// or the built-in preset generator, in that order.
TrussModel resolve_model(const std::string& source, const std::string& preset_dir_flag) {
    if (source.size() > 5 && source.substr(source.size() - 5) == ".json") {
        return load_model_file(source);
    }
    const std::string path = preset_dir(preset_dir_flag) + "/" + source + ".json";
    if (std::ifstream probe(path); probe) {
        return load_model_file(path);
    }
    return preset_model(source);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write " + out_path);
    out << text;
}

struct GlobalFlags {
    std::string out;
    std::string format = "text";
    double zero_tol = kDefaultZeroTol;
    double cluster_tol = kDefaultClusterTol;
    double cdm_step = kDefaultCdmStep;
    bool deterministic = false;
    std::string preset_dir;
    std::string data_dir;
};

void add_global_flags(CLI::App* cmd, GlobalFlags& g) {
    cmd->add_option("--out", g.out, "write the report to a file instead of stdout");
    cmd->add_option("--format", g.format, "text|csv|json")->check(CLI::IsMember({"text", "csv", "json"}));
    cmd->add_option("--zero-tol", g.zero_tol, "zero-mode tolerance, relative to lambda_max");
    cmd->add_option("--cluster-tol", g.cluster_tol, "cluster gap tolerance");
    cmd->add_option("--cdm-step", g.cdm_step, "central-difference step on group areas");
    cmd->add_flag("--deterministic", g.deterministic, "suppress run metadata in reports");
    cmd->add_option("--preset-dir", g.preset_dir, "preset model directory (or SYMSPEC_PRESET_DIR)");
    cmd->add_option("--data-dir", g.data_dir, "expected-value fixture directory (or SYMSPEC_DATA_DIR)");
}

std::vector<Quantity> build_quantities(const SolvedModel& solved, const std::string& kind, int n,
                                       double p, double q) {
    std::vector<Quantity> out;
    if (kind == "eigen") {
        // Leading member of every non-invariant repeated cluster, the
        // selection the reference sensitivity tables print.
        const std::vector<bool> inv = invariant_clusters(solved);
        for (int c = 0; c < solved.clusters.count(); ++c) {
            if (solved.clusters[c].count > 1 && !inv[size_t(c)]) {
                out.push_back(eigenvalue_quantity(solved, solved.clusters[c].start));
            }
        }
    } else if (kind == "eigen-all") {
        for (int k = 0; k < solved.retained.size(); ++k) {
            out.push_back(eigenvalue_quantity(solved, k));
        }
    } else if (kind == "cluster-means") {
        for (int c = 0; c < solved.clusters.count(); ++c) {
            out.push_back(cluster_mean_quantity(solved, c));
        }
    } else if (kind == "pnorm") {
        out.push_back(pnorm_quantity(solved, n, p));
    } else if (kind == "ks") {
        out.push_back(ks_quantity(solved, n, q));
    } else if (kind == "poly") {
        out.push_back(demo_polynomial_quantity(solved, 0, true));
        out.push_back(demo_polynomial_quantity(solved, 0, false));
    } else {
        throw std::invalid_argument("unknown quantity: " + kind);
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"free-vibration eigen-analysis and differentiability audits for symmetric trusses"};
    app.require_subcommand(1);

    GlobalFlags g;

    // generate
    auto* gen = app.add_subcommand("generate", "write a model file for a family preset");
    std::string gen_family, gen_preset = "nosym", gen_out;
    int gen_n = 8;
    std::string gen_perturb;
    gen->add_option("family", gen_family, "dome|tetrahedral|octahedral|dodecahedral|icosahedral")
        ->required();
    gen->add_option("--n", gen_n, "number of dome sectors (dome only)");
    gen->add_option("--preset", gen_preset, "design-variable preset id");
    gen->add_option("--perturb-apex", gen_perturb, "apex offset dx,dy,dz (dome only)");
    gen->add_option("--out", gen_out, "output model file")->required();

    // analyze
    auto* ana = app.add_subcommand("analyze", "solve a model and report its spectrum and clusters");
    std::string ana_model;
    bool ana_vectors = false;
    ana->add_option("model", ana_model, "model file or preset name")->required();
    ana->add_flag("--eigenvectors", ana_vectors, "emit the raw spectrum as JSON, eigenvectors included");
    add_global_flags(ana, g);

    // audit
    auto* aud = app.add_subcommand("audit", "CDM vs analytical sensitivity check");
    std::string aud_model, aud_quantity = "eigen";
    int aud_n = 0;
    double aud_p = 10.0, aud_q = 10.0;
    aud->add_option("model", aud_model, "model file or preset name")->required();
    aud->add_option("--quantity", aud_quantity, "eigen|eigen-all|cluster-means|pnorm|ks|poly");
    aud->add_option("--n", aud_n, "truncation count for pnorm/ks");
    aud->add_option("--p", aud_p, "p-norm exponent");
    aud->add_option("--q", aud_q, "KS aggregation parameter");
    add_global_flags(aud, g);

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "re-run a bundled reference table and diff the values");
    std::string rep_id;
    rep->add_option("id", rep_id, "table1..table18, fig9, fig13, fig14, fig15")->required();
    add_global_flags(rep, g);

    // orbits
    auto* orb = app.add_subcommand("orbits", "node and element orbits under a point group");
    std::string orb_model, orb_group;
    orb->add_option("model", orb_model, "model file or preset name")->required();
    orb->add_option("group", orb_group, "group spec, e.g. c8v, td, oh, ih, ih@dodeca")->required();
    add_global_flags(orb, g);

    // check-symmetry
    auto* chk = app.add_subcommand("check-symmetry", "geometric/design symmetry flags and accidental scan");
    std::string chk_model, chk_group;
    chk->add_option("model", chk_model, "model file or preset name")->required();
    chk->add_option("group", chk_group, "enforced group spec")->required();
    add_global_flags(chk, g);

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        TrussModel m;
        if (gen_family == "dome") {
            m = apply_preset(make_dome(gen_n), "dome", gen_preset);
        } else if (gen_family == "tetrahedral") {
            m = apply_preset(make_tetrahedral(), gen_family, gen_preset);
        } else if (gen_family == "octahedral") {
            m = apply_preset(make_octahedral(), gen_family, gen_preset);
        } else if (gen_family == "dodecahedral") {
            m = apply_preset(make_dodecahedral(), gen_family, gen_preset);
        } else if (gen_family == "icosahedral") {
            m = apply_preset(make_icosahedral(), gen_family, gen_preset);
        } else {
            throw std::invalid_argument("unknown family: " + gen_family);
        }
        if (!gen_perturb.empty()) {
            Eigen::Vector3d d;
            if (std::sscanf(gen_perturb.c_str(), "%lf,%lf,%lf", &d.x(), &d.y(), &d.z()) != 3) {
                throw std::invalid_argument("--perturb-apex expects dx,dy,dz");
            }
            m = perturb_apex(m, d);
        }
        m.validate();
        save_model_file(m, gen_out);
        std::cout << "wrote " << gen_out << " (" << m.elements.size() << " elements, "
                  << m.groups.size() << " groups)\n";
        return kExitOk;
    }

    if (ana->parsed()) {
        const TrussModel m = resolve_model(ana_model, g.preset_dir);
        const SolvedModel solved = analyze(m, g.zero_tol, g.cluster_tol);
        if (ana_vectors) {
            emit(spectrum_json(solved.spectrum, true), g.out);
            return kExitOk;
        }
        const std::vector<bool> invariant = invariant_clusters(solved);
        emit(spectrum_report(solved, invariant, parse_format(g.format)), g.out);
        return kExitOk;
    }

    if (aud->parsed()) {
        const TrussModel m = resolve_model(aud_model, g.preset_dir);
        const SolvedModel solved = analyze(m, g.zero_tol, g.cluster_tol);
        if (aud_n <= 0) aud_n = solved.retained.size();
        const auto quantities = build_quantities(solved, aud_quantity, aud_n, aud_p, aud_q);
        const AuditReport report = audit(solved, quantities, {}, {}, g.cdm_step, g.zero_tol);
        emit(audit_report_text(report, parse_format(g.format)), g.out);
        // Non-differentiability is a finding, not a failure.
        return kExitOk;
    }

    if (rep->parsed()) {
        const ReproduceResult result = reproduce(rep_id, data_dir(g.data_dir));
        std::ostringstream os;
        os << result.id << ": " << (result.pass ? "PASS" : "FAIL") << " (" << result.checked
           << " checks, " << result.failed << " failed)\n";
        for (const std::string& line : result.notes) os << "  " << line << '\n';
        emit(os.str(), g.out);
        return result.pass ? kExitOk : kExitMismatch;
    }

    if (orb->parsed()) {
        const TrussModel m = resolve_model(orb_model, g.preset_dir);
        const PointGroup group = make_group(orb_group);
        const OrbitPartition p = orbits(m, group);
        emit(orbit_report(p.node_orbits, p.element_orbits, parse_format(g.format)), g.out);
        return kExitOk;
    }

    if (chk->parsed()) {
        const TrussModel m = resolve_model(chk_model, g.preset_dir);
        const PointGroup group = make_group(chk_group);
        const SymmetryCheck sym = check_symmetry(m, group);
        const AccidentalReport acc = detect_accidental(m, chk_group);
        std::ostringstream os;
        os << "group " << group.name << " (order " << group.order() << ")\n"
           << "geometric symmetry: " << (sym.geometric ? "yes" : "no") << '\n'
           << "design symmetry:    " << (sym.design ? "yes" : "no") << '\n'
           << "detected design group: " << acc.detected << " (order " << acc.detected_order << ")\n"
           << "accidental: " << (acc.accidental ? "yes" : "no") << '\n';
        emit(os.str(), g.out);
        return kExitOk;
    }

    return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const IndefiniteMassError& ex) {
        std::cerr << "numerical error: " << ex.what() << '\n';
        return kExitNumerical;
    } catch (const DegenerateSpectrumError& ex) {
        std::cerr << "numerical error: " << ex.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "input error: " << ex.what() << '\n';
        return kExitInput;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitNumerical;
    }
}
