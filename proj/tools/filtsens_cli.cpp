// filtsens: analyze filtering sensitivity integrals of LTI systems given as
// JSON documents, or reproduce the built-in reference suite.
//
// Exit codes: 0 analysis completed, 2 validation failure, 3 parse/schema/IO failure.

#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "filtsens/analysis.hpp"
#include "filtsens/paper_suite.hpp"
#include "filtsens/report.hpp"
#include "filtsens/spec_document.hpp"

namespace {

struct AnalyzeArgs {
    std::vector<std::string> files;
    std::optional<bool> quadrature;
    bool lemma1 = false;
    std::string format = "text";
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
};

struct FileOutcome {
    std::string text;
    int exit_code = 0;
    bool failed_to_load = false;
    std::string error;
};

FileOutcome analyze_file(const std::string& path, const AnalyzeArgs& args) {
    FileOutcome out;
    try {
        filtsens::SystemSpecDocument doc = filtsens::load_spec(path);
        if (args.quadrature) doc.options.run_quadrature = *args.quadrature;
        if (args.lemma1) doc.options.run_lemma1 = true;
        if (args.tol) doc.options.quad_tol = *args.tol;
        if (args.seed) doc.options.seed = *args.seed;
        const filtsens::AnalysisReport report = filtsens::analyze(doc);
        out.exit_code = report.exit_code();
        out.text = args.format == "json" ? filtsens::render_json(report) : filtsens::render_text(report);
    } catch (const filtsens::Error& e) {
        out.failed_to_load = true;
        out.exit_code = 3;
        out.error = std::string(filtsens::to_string(e.code())) + ": " + e.what();
    }
    return out;
}

int run_analyze(const AnalyzeArgs& args) {
    std::vector<std::future<FileOutcome>> jobs;
    jobs.reserve(args.files.size());
    for (const auto& f : args.files) jobs.push_back(std::async(std::launch::async, analyze_file, f, args));

    int exit_code = 0;
    const bool json = args.format == "json";
    const bool many = args.files.size() > 1;
    if (json && many) std::cout << "[\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        FileOutcome r = jobs[i].get();
        exit_code = std::max(exit_code, r.exit_code);
        if (r.failed_to_load) {
            std::cerr << "filtsens: " << r.error << "\n";
            if (json && many) {
                std::cout << "null" << (i + 1 < jobs.size() ? ",\n" : "\n");
            }
            continue;
        }
        if (json) {
            std::cout << r.text << (many && i + 1 < jobs.size() ? ",\n" : "\n");
        } else {
            if (many) std::cout << "== " << args.files[i] << "\n";
            std::cout << r.text << (many && i + 1 < jobs.size() ? "\n" : "");
        }
    }
    if (json && many) std::cout << "]\n";
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Filtering sensitivity integrals: closed-form, direct and quadrature evaluation"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Analyze one or more system documents");
    analyze->add_option("files", analyze_args.files, "JSON system documents")->required()->check(CLI::ExistingFile);
    auto* quad_on = analyze->add_flag("--quadrature", "Run the quadrature oracle (default)");
    auto* quad_off = analyze->add_flag("--no-quadrature", "Skip the quadrature oracle");
    quad_on->excludes(quad_off);
    analyze->add_flag("--lemma1", analyze_args.lemma1, "Run the residue-formula cross-check (continuous time)");
    analyze->add_option("--format", analyze_args.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    analyze->add_option("--tol", analyze_args.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
    analyze->add_option("--seed", analyze_args.seed, "Seed for the complementarity sampling");

    filtsens::SuiteOptions suite_opts;
    bool suite_no_quad = false;
    auto* suite = app.add_subcommand("paper-suite", "Reproduce the nine reference scenarios");
    suite->add_option("--tol", suite_opts.quad_tol, "Quadrature tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    suite->add_option("--eps-gain", suite_opts.eps_gain, "Override the exact-gain tolerance")
        ->check(CLI::PositiveNumber);
    suite->add_flag("--no-quadrature", suite_no_quad, "Check closed forms only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    if (analyze->parsed()) {
        if (quad_on->count() > 0) analyze_args.quadrature = true;
        if (quad_off->count() > 0) analyze_args.quadrature = false;
        return run_analyze(analyze_args);
    }
    suite_opts.run_quadrature = !suite_no_quad;
    const filtsens::SuiteReport report = filtsens::run_paper_suite(suite_opts);
    std::cout << filtsens::render_suite(report);
    return report.all_passed() ? 0 : 1;
}
