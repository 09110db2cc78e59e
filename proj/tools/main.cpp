#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "curvlab/error.hpp"
#include "curvlab/metric_file.hpp"
#include "curvlab/report.hpp"
#include "curvlab/verify.hpp"

namespace {

using namespace curvlab;

enum Exit { ok = 0, failure = 1, structure = 2, domain = 3, assertion = 4 };

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> points;
    std::optional<double> tol_structural, tol_derived, tol_theorem;
    std::string format = "text";
    std::string output;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--seed", f.seed, "Point sampler seed (default 0)");
    cmd->add_option("--points", f.points, "Number of sample points (default 50)")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-structural", f.tol_structural, "Structural tolerance (default 1e-9)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-derived", f.tol_derived, "Derived-quantity tolerance (default 1e-8)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-theorem", f.tol_theorem, "Theorem-level tolerance (default 1e-6)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "machine"}));
    cmd->add_option("-o,--output", f.output, "Write the report to a file instead of stdout");
}

// Command line beats the file's [analysis] stanza, which beats the built-in default.
template <class T>
T pick(const std::optional<T>& cli, const std::optional<T>& file, T fallback, std::string& source)
{
    if (cli) {
        source = "command line";
        return *cli;
    }
    if (file) {
        source = "file";
        return *file;
    }
    source = "default";
    return fallback;
}

AnalysisOptions resolve(const CommonFlags& f, const AnalysisDefaults& file)
{
    AnalysisOptions o;
    const Tolerances defaults;
    std::string unused, s1, s2, s3;
    o.seed = pick<std::uint64_t>(f.seed, file.seed, 0, o.seed_source);
    o.points = pick<int>(f.points, file.points, 50, unused);
    o.tol.structural = pick(f.tol_structural, file.tol_structural, defaults.structural, s1);
    o.tol.derived = pick(f.tol_derived, file.tol_derived, defaults.derived, s2);
    o.tol.theorem = pick(f.tol_theorem, file.tol_theorem, defaults.theorem, s3);
    o.tolerance_source = s1 == s2 && s2 == s3
                             ? s1
                             : "structural: " + s1 + ", derived: " + s2 + ", theorem: " + s3;
    o.threads = f.threads;
    return o;
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error("cannot write '" + path + "'");
}

int run_analyze(const std::string& input, const CommonFlags& f)
{
    const MetricDocument doc = load_input(input);
    const Report r = make_report(input, doc.entry, resolve(f, doc.analysis));
    emit(f.format == "machine" ? render_machine(r) : render_text(r), f.output);
    if (!r.analysis.structural_failure.empty()) {
        std::cerr << "structure validation failed: " << r.analysis.structural_failure << "\n";
        return structure;
    }
    return ok;
}

int run_verify(const std::string& target, const CommonFlags& f)
{
    const AnalysisOptions o = resolve(f, {});
    const VerificationReport r = verify_target(target, o.seed, o.points, o.tol);
    emit(f.format == "machine" ? to_json(r).dump(2) + "\n" : render_text(r), f.output);
    return r.passed() ? ok : assertion;
}

int run_catalog_list()
{
    const auto pad = [](std::string s, std::size_t w) { return s.size() < w ? s + std::string(w - s.size(), ' ') : s + ' '; };
    for (const CatalogEntry& e : catalog_entries())
        std::cout << pad(e.name, 20) << pad(to_string(e.kind), 9) << "dim " << e.chart.dim() << "\n";
    return ok;
}

const CatalogEntry& require_entry(const std::string& name)
{
    const CatalogEntry* e = find_entry(name);
    if (!e) throw NotFoundError("unknown catalog entry '" + name + "'");
    return *e;
}

int run_catalog_show(const std::string& name)
{
    const CatalogEntry& e = require_entry(name);
    std::cout << e.name << " (" << to_string(e.kind) << ", dimension " << e.chart.dim() << ")\n";
    if (!e.notes.empty()) std::cout << e.notes << "\n";
    std::cout << "\nexpected\n";
    for (const Expectation& x : e.expected) {
        std::cout << "  " << x.predicate << ": " << (x.verdict ? "true" : "false");
        for (const ExpectedConstant& k : x.constants)
            std::cout << "  " << k.name << "=" << format_number(k.value) << " (+/-" << format_number(k.tolerance)
                      << ")";
        std::cout << "  [" << x.provenance << "]\n";
    }
    std::cout << "\n" << export_metric_file(e);
    return ok;
}

int run_catalog_export(const std::string& name, const std::string& path)
{
    emit(export_metric_file(require_entry(name)), path);
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Curvature classification of semi-Riemannian, warped-product and contact metrics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    CommonFlags analyze_flags, verify_flags;
    std::string input, target, entry_name, export_path;

    CLI::App* analyze = app.add_subcommand("analyze", "Classify a metric from a definition file or catalog:<name>");
    analyze->add_option("input", input, "Definition file path or catalog:<name>")->required();
    add_common(analyze, analyze_flags);
    analyze->add_option("--threads", analyze_flags.threads, "Worker threads for point evaluation")
        ->check(CLI::PositiveNumber);

    std::vector<std::string> target_names;
    std::string target_help = "One of:";
    for (const auto& [name, description] : verification_targets()) {
        target_names.push_back(name);
        target_help += "\n  " + name + "  " + description;
    }
    CLI::App* verify = app.add_subcommand("verify-paper", "Check the stated results on the catalog fixtures");
    verify->add_option("target", target, target_help)->required()->check(CLI::IsMember(target_names));
    add_common(verify, verify_flags);

    CLI::App* catalog = app.add_subcommand("catalog", "List, describe or export built-in entries");
    catalog->require_subcommand(1);
    catalog->add_subcommand("list", "Names, kinds and dimensions");
    CLI::App* show = catalog->add_subcommand("show", "Expected predicates and the definition");
    show->add_option("name", entry_name)->required();
    CLI::App* exp = catalog->add_subcommand("export", "Write the entry as a definition file");
    exp->add_option("name", entry_name)->required();
    exp->add_option("-o,--output", export_path, "Destination file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : failure;
    }

    try {
        if (*analyze) return run_analyze(input, analyze_flags);
        if (*verify) return run_verify(target, verify_flags);
        if (catalog->got_subcommand("list")) return run_catalog_list();
        if (*show) return run_catalog_show(entry_name);
        if (*exp) return run_catalog_export(entry_name, export_path);
    } catch (const StructureError& e) {
        std::cerr << "structure error: " << e.what() << "\n";
        return structure;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return structure;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return domain;
    } catch (const DegenerateMetricError& e) {
        std::cerr << "degenerate metric: " << e.what() << "\n";
        return domain;
    } catch (const FileFormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return failure;
    } catch (const NotFoundError& e) {
        std::cerr << "not found: " << e.what() << "\n";
        return failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
    return failure;
}
