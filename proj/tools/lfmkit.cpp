// lfmkit: fit labor-force driven inflation/unemployment models and project them.
//
//   lfmkit ingest  FILE --key VARIABLE/SOURCE [--unit U] [--label L] [--overwrite]
//   lfmkit list
//   lfmkit compare --a KEY --b KEY [--transform levels|change_rate]
//   lfmkit fit     --relation R [--window A:B] [--max-lag N] [--estimator E] --out MODEL
//   lfmkit project --scenario FILE [--format csv|json] [--out PATH]
//   lfmkit emit    (--dataset KEY | --model REF | --bundle FILE) [--format csv|json] [--out PATH]
//
// Every command takes --registry PATH (default $LFMKIT_REGISTRY, then ./registry).

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lfmkit/lfmkit.hpp"

namespace fs = std::filesystem;
using namespace lfmkit;

namespace {

struct Common {
    std::string registry = "registry";
    std::string format = "csv";
    std::string out;
};

/// Writes to --out when given, stdout otherwise.
void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << content;
}

std::optional<YearRange> parse_window(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return parse_year_range(text);
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string file;
    std::string key;
    std::string unit;
    std::string label;
    bool overwrite = false;
};

int cmd_ingest(const Common& common, const IngestArgs& args) {
    const auto key = DatasetKey::parse(args.key);
    std::ifstream in(args.file);
    if (!in) {
        throw LookupError("cannot open " + args.file);
    }
    const auto doc = detail::parse_csv(in);
    const Unit unit = args.unit.empty() ? default_unit(key.variable) : unit_from_string(args.unit);
    const auto series = detail::to_series(doc, unit, args.label.empty() ? key.to_string() : args.label);

    const auto findings = validate(series);
    for (const auto& f : findings) {
        std::cout << key.to_string() << ": " << to_string(f) << '\n';
    }
    if (has_errors(findings)) {
        return 1;
    }
    DatasetRegistry reg(common.registry);
    (void)reg.register_series(key, series, args.overwrite);
    std::cout << "registered " << key.to_string() << " " << series.years().to_string() << " (" << series.size()
              << " values) in " << reg.root().string() << '\n';
    return 0;
}

int cmd_list(const Common& common) {
    const DatasetRegistry reg(common.registry);
    for (const auto& key : reg.keys()) {
        const auto s = reg.get(key);
        std::cout << key.to_string() << '\t' << s.years().to_string() << '\t' << to_string(s.unit()) << '\t'
                  << s.label() << '\n';
    }
    return 0;
}

struct CompareArgs {
    std::string a;
    std::string b;
    std::string transform = "levels";
};

int cmd_compare(const Common& common, const CompareArgs& args) {
    const DatasetRegistry reg(common.registry);
    const auto t = args.transform == "change_rate" ? Transform::change_rate : Transform::levels;
    const auto r = compare_sources(reg, DatasetKey::parse(args.a), DatasetKey::parse(args.b), t);
    std::ostringstream out;
    out << "a: " << args.a << "\nb: " << args.b << "\ntransform: " << args.transform << '\n'
        << "common_window: " << r.common_window.to_string() << '\n'
        << "max_abs_diff: " << format_report(r.max_abs_diff) << " (" << r.max_abs_diff_year << ")\n"
        << "mean_abs_diff: " << format_report(r.mean_abs_diff) << '\n'
        << "correlation: " << format_report(r.correlation) << '\n';
    write_output(common.out, out.str());
    return 0;
}

// ---------------------------------------------------------------------------

struct FitArgs {
    std::string relation;
    std::string window;
    int max_lag = -1;
    std::string estimator;
    std::optional<int> cumulative_start;
    std::string inflation = "cpi_inflation/nac";
    std::string unemployment = "unemployment/nac";
    std::string labor_force = "labor_force/nac";
    std::string report;
    double adjust_intercept = 0.0;
};

YearRange default_window(const std::string& relation) {
    if (relation == "unemployment-lf") return {1980, 2006};
    if (relation == "generalized") return {1981, 2006};
    return kPhillipsWindow;
}

void report_fit(std::ostream& out, const LinearFitResult& f, const std::string& slope_name,
                const std::string& intercept_name) {
    out << "coefficients:\n"
        << "  " << intercept_name << " = " << format_report(f.intercept) << " [" << format_report(f.intercept_stderr)
        << "]\n"
        << "  " << slope_name << " = " << format_report(f.slope) << " [" << format_report(f.slope_stderr) << "]\n"
        << "r_squared: " << format_report(f.r_squared) << '\n'
        << "residual_stdev: " << format_report(f.residual_stdev) << '\n'
        << "n: " << f.n << '\n'
        << "period: " << f.period.to_string() << '\n';
}

void report_scan(std::ostream& out, const LagSearchResult& s) {
    out << "best_lag: " << s.best_lag << "\nlag_scan:\n  lag,r_squared,n\n";
    for (const auto& e : s.scan) {
        out << "  " << e.lag << ',' << format_report(e.r_squared) << ',' << e.n << '\n';
    }
    for (const auto& w : s.warnings) out << "  warning: " << w << '\n';
}

void report_calibration(std::ostream& out, const CalibrationResult& c) {
    const auto names = coefficient_names(c.family);
    out << "coefficients:\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << "  " << names[i] << " = " << format_report(c.coefficients.values[i]) << '\n';
    }
    out << "lag: " << c.coefficients.lag << '\n'
        << "cumulative_rms: " << format_report(c.objective) << '\n'
        << "annual_rms: " << format_report(c.annual_rms) << '\n'
        << "evaluations: " << c.evaluations << '\n'
        << "converged: " << (c.converged ? "yes" : "no") << '\n';
    if (c.family == ModelFamily::single_driver) {
        out << "lag_scan:\n  lag,cumulative_rms\n";
        for (const auto& e : c.lag_scan) out << "  " << e.lag << ',' << format_report(e.objective) << '\n';
    }
    for (const auto& w : c.warnings) out << "  warning: " << w << '\n';
}

void report_residuals(std::ostream& out, const ResidualSummary& r) {
    out << "residuals: stdev " << format_report(r.stdev) << ", max_abs " << format_report(r.max_abs) << ", n " << r.n
        << '\n';
}

int cmd_fit(const Common& common, const FitArgs& args) {
    const DatasetRegistry reg(common.registry);
    const auto& rel = args.relation;
    const auto w = parse_window(args.window).value_or(default_window(rel));
    const std::string estimator =
        !args.estimator.empty() ? args.estimator : (rel == "phillips" ? "ols" : "cumulative");
    const int max_lag = args.max_lag >= 0 ? args.max_lag : (rel == "generalized" ? 0 : kDefaultMaxLag);
    if (common.out.empty()) {
        throw SpecificationError("fit needs --out for the model file");
    }

    std::ostringstream report;
    report << "relation: " << rel << "\nestimator: " << estimator << "\nwindow: " << w.to_string() << '\n';
    Model model;

    if (rel == "phillips") {
        if (estimator != "ols") throw SpecificationError("the Phillips relation is fitted by ols only");
        const auto pi = reg.get(DatasetKey::parse(args.inflation));
        const auto ue = reg.get(DatasetKey::parse(args.unemployment));
        auto m = fit_phillips(pi, ue, w, max_lag);
        const auto search = lag_search(pi, window(ue, w), max_lag);
        report_fit(report, *m.fit, "slope", "intercept");
        report_scan(report, search);
        if (args.adjust_intercept != 0.0) {
            m = intercept_adjust(m, args.adjust_intercept);
            report << "intercept_adjusted: " << format_report(m.intercept) << '\n';
        }
        report_residuals(report, *evaluate(m, pi, w, window(ue, w)).residuals);
        model = m;
    } else if (rel == "inflation-lf" || rel == "unemployment-lf") {
        const Target target = rel == "inflation-lf" ? Target::inflation : Target::unemployment;
        const auto rate = change_rate(reg.get(DatasetKey::parse(args.labor_force)));
        const auto observed = reg.get(DatasetKey::parse(target == Target::inflation ? args.inflation : args.unemployment));
        LaggedLinearModel m;
        if (estimator == "ols") {
            LagSearchResult search;
            m = fit_lagged_ols(target, rate, observed, w, max_lag, &search);
            report_fit(report, search.fit, "B", "A");
            report_scan(report, search);
        } else if (estimator == "cumulative") {
            CalibrationResult cal;
            m = fit_lagged_cumulative(target, rate, observed, w, default_grid(ModelFamily::single_driver, max_lag),
                                      args.cumulative_start, &cal);
            report_calibration(report, cal);
        } else {
            throw SpecificationError("unknown estimator '" + estimator + "'");
        }
        report_residuals(report, *evaluate(m, rate, w, window(observed, w)).residuals);
        model = m;
    } else if (rel == "generalized") {
        if (estimator != "cumulative") throw SpecificationError("the generalized relation is fitted by cumulative only");
        const auto rate = change_rate(reg.get(DatasetKey::parse(args.labor_force)));
        const auto pi = reg.get(DatasetKey::parse(args.inflation));
        const auto ue = reg.get(DatasetKey::parse(args.unemployment));
        CalibrationResult cal;
        const auto m = fit_generalized(rate, ue, pi, w, default_grid(ModelFamily::generalized), args.cumulative_start, &cal);
        report_calibration(report, cal);
        report_residuals(report, *evaluate(m, rate, ue, w, window(pi, w)).residuals);
        model = m;
    } else {
        throw SpecificationError("unknown relation '" + rel + "'");
    }

    write_output(common.out, to_text(model));
    write_output(args.report, report.str());
    return 0;
}

// ---------------------------------------------------------------------------

struct ProjectArgs {
    std::string scenario;
    std::string inflation_model;
    std::string unemployment_model;
};

std::string render_series(const std::vector<NamedColumn>& columns, const std::string& format) {
    std::ostringstream out;
    if (format == "json") {
        std::vector<AnnualSeries> series;
        for (const auto& c : columns) series.push_back(c.series);
        write_series_json(out, series);
    } else if (format == "csv") {
        write_table_csv(out, columns);
    } else {
        throw SpecificationError("unknown format '" + format + "'");
    }
    return out.str();
}

int cmd_project(const Common& common, const ProjectArgs& args) {
    const DatasetRegistry reg(common.registry);
    std::ifstream in(args.scenario);
    if (!in) throw LookupError("cannot open scenario " + args.scenario);
    auto sf = parse_scenario(in);
    if (!args.inflation_model.empty()) sf.inflation_model = args.inflation_model;
    if (!args.unemployment_model.empty()) sf.unemployment_model = args.unemployment_model;
    const auto base = fs::path(args.scenario).parent_path();
    const auto bundle = forecast(build_scenario(sf, reg, base));
    for (const auto& note : bundle.notes) std::cerr << "note: " << note << '\n';
    auto columns = bundle_columns(bundle);
    if (common.format == "json") {
        for (auto& c : columns) c.series = c.series.with_label(c.name);
    }
    write_output(common.out, render_series(columns, common.format));
    return 0;
}

// ---------------------------------------------------------------------------

struct EmitArgs {
    std::string dataset;
    std::string transform = "levels";
    std::optional<int> from;
    std::string window;
    std::string model;
    std::string bundle;
};

int cmd_emit(const Common& common, const EmitArgs& args) {
    const int sources = !args.dataset.empty() + !args.model.empty() + !args.bundle.empty();
    if (sources != 1) {
        throw SpecificationError("emit needs exactly one of --dataset, --model, --bundle");
    }
    if (!args.model.empty()) {
        const auto model = resolve_model(args.model);
        if (common.format == "json") {
            std::istringstream in(to_text(model));
            nlohmann::json j(read_key_values(in));
            write_output(common.out, j.dump(2) + "\n");
        } else {
            write_output(common.out, to_text(model));
        }
        return 0;
    }
    std::vector<NamedColumn> columns;
    if (!args.bundle.empty()) {
        std::ifstream in(args.bundle);
        if (!in) throw LookupError("cannot open " + args.bundle);
        columns = read_table_csv(in);
    } else {
        const DatasetRegistry reg(common.registry);
        const auto key = DatasetKey::parse(args.dataset);
        auto s = reg.get(key);
        if (args.transform == "change_rate") {
            s = change_rate(s);
        } else if (args.transform == "cumulative") {
            s = cumulative(s, args.from.value_or(s.start_year()));
        } else if (args.transform != "levels") {
            throw SpecificationError("unknown transform '" + args.transform + "'");
        }
        if (const auto w = parse_window(args.window)) s = window(s, *w);
        columns.push_back({"value", s});
    }
    if (const auto w = parse_window(args.window); w && !args.bundle.empty()) {
        for (auto& c : columns) c.series = window(c.series, *w);
    }
    write_output(common.out, render_series(columns, common.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lfmkit: labor-force models of inflation and unemployment"};
    app.require_subcommand(1);
    Common common;
    if (const char* env = std::getenv("LFMKIT_REGISTRY"); env && *env) common.registry = env;

    auto add_common = [&common](CLI::App* sub, bool with_format) {
        sub->add_option("--registry", common.registry, "Registry directory (default $LFMKIT_REGISTRY or ./registry)");
        sub->add_option("--out", common.out, "Output path (default stdout)");
        if (with_format) {
            sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        }
    };

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate a year,value CSV and register it");
    add_common(ingest_cmd, false);
    ingest_cmd->add_option("file", ingest.file, "CSV file")->required();
    ingest_cmd->add_option("--key", ingest.key, "Dataset key VARIABLE/SOURCE")->required();
    ingest_cmd->add_option("--unit", ingest.unit, "rate, persons or index (default by variable)");
    ingest_cmd->add_option("--label", ingest.label, "Free-text label");
    ingest_cmd->add_flag("--overwrite", ingest.overwrite, "Replace an existing dataset");

    auto* list_cmd = app.add_subcommand("list", "List registered datasets");
    add_common(list_cmd, false);

    CompareArgs compare;
    auto* compare_cmd = app.add_subcommand("compare", "Divergence between two registered datasets");
    add_common(compare_cmd, false);
    compare_cmd->add_option("--a", compare.a, "First dataset key")->required();
    compare_cmd->add_option("--b", compare.b, "Second dataset key")->required();
    compare_cmd->add_option("--transform", compare.transform)->check(CLI::IsMember({"levels", "change_rate"}));

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit one relation and write a model file plus a report");
    add_common(fit_cmd, false);
    fit_cmd->add_option("--relation", fit.relation)
        ->required()
        ->check(CLI::IsMember({"phillips", "inflation-lf", "unemployment-lf", "generalized"}));
    fit_cmd->add_option("--window", fit.window, "FIRST:LAST");
    fit_cmd->add_option("--max-lag", fit.max_lag, "Largest lag tried (default 6; 0 for generalized)");
    fit_cmd->add_option("--estimator", fit.estimator)->check(CLI::IsMember({"ols", "cumulative"}));
    fit_cmd->add_option("--cumulative-start", fit.cumulative_start, "First year of the cumulative curves");
    fit_cmd->add_option("--inflation", fit.inflation, "Inflation dataset key");
    fit_cmd->add_option("--unemployment", fit.unemployment, "Unemployment dataset key");
    fit_cmd->add_option("--labor-force", fit.labor_force, "Labor-force level dataset key");
    fit_cmd->add_option("--report", fit.report, "Report path (default stdout)");
    fit_cmd->add_option("--adjust-intercept", fit.adjust_intercept, "Phillips only: shift the free term");

    ProjectArgs project;
    auto* project_cmd = app.add_subcommand("project", "Forecast labor force, inflation and unemployment");
    add_common(project_cmd, true);
    project_cmd->add_option("--scenario", project.scenario, "Scenario file")->required();
    project_cmd->add_option("--inflation-model", project.inflation_model, "preset:NAME or model file");
    project_cmd->add_option("--unemployment-model", project.unemployment_model, "preset:NAME or model file");
    project_cmd->add_option("--preset", project.inflation_model, "Inflation preset name")
        ->transform([](std::string s) { return "preset:" + s; });

    EmitArgs emit;
    auto* emit_cmd = app.add_subcommand("emit", "Write a dataset, model or forecast table");
    add_common(emit_cmd, true);
    emit_cmd->add_option("--dataset", emit.dataset, "Dataset key");
    emit_cmd->add_option("--transform", emit.transform)->check(CLI::IsMember({"levels", "change_rate", "cumulative"}));
    emit_cmd->add_option("--from", emit.from, "Cumulative start year");
    emit_cmd->add_option("--window", emit.window, "FIRST:LAST");
    emit_cmd->add_option("--model", emit.model, "preset:NAME or model file");
    emit_cmd->add_option("--preset", emit.model, "Preset name")->transform([](std::string s) { return "preset:" + s; });
    emit_cmd->add_option("--bundle", emit.bundle, "Forecast CSV written by project");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*ingest_cmd) return cmd_ingest(common, ingest);
        if (*list_cmd) return cmd_list(common);
        if (*compare_cmd) return cmd_compare(common, compare);
        if (*fit_cmd) return cmd_fit(common, fit);
        if (*project_cmd) return cmd_project(common, project);
        if (*emit_cmd) return cmd_emit(common, emit);
    } catch (const lfmkit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
