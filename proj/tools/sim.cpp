// Command-line front end: sweep, report and compare.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hexsim/bench.hpp"

namespace {

std::size_t count_flagged(const std::vector<hexsim::ResultRow> &rows) {
    std::size_t n = 0;
    for (const auto &r : rows) {
        n += r.flagged() ? 1 : 0;
    }
    return n;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int run_sweep(const std::string &config_path, const std::string &out_override, std::size_t workers) {
    hexsim::RunConfig c = hexsim::load_config(config_path);
    if (!out_override.empty()) {
        c.output = out_override;
    }
    if (workers > 0) {
        c.workers = workers;
    }
    std::ofstream file;
    std::ostream *out = &std::cout;
    if (!c.output.empty()) {
        file.open(c.output);
        if (!file) {
            throw hexsim::ArgumentError("cannot write " + c.output);
        }
        out = &file;
    }
    auto rows = hexsim::sweep(c, out);
    const std::size_t flagged = count_flagged(rows);
    std::cerr << rows.size() << " points, " << flagged << " flagged\n";
    return flagged == 0 ? 0 : 1;
}

int run_report(const std::string &in, const std::string &observable) {
    hexsim::ResultTable t = hexsim::read_csv_file(in);
    if (!observable.empty() && !t.observable.empty() && observable != t.observable) {
        throw hexsim::ArgumentError("table holds observable '" + t.observable + "', not '" + observable + "'");
    }
    std::cout << "observable " << (observable.empty() ? t.observable : observable) << '\n';
    std::cout << "method,theta_h,top_param,value,sigma,fit_slope,fit_intercept,delta,norm,averaged,delta_bar\n";
    for (const auto &r : hexsim::convergence_reports(t)) {
        std::cout << r.method << ',' << fmt(r.theta_h) << ',';
        if (!r.available) {
            std::cout << "unavailable: " << r.reason << '\n';
            continue;
        }
        std::cout << fmt(r.top_param) << ',' << fmt(r.top_value) << ',' << fmt(r.sigma) << ',' << fmt(r.fit_slope)
                  << ',' << fmt(r.fit_intercept) << ',' << fmt(r.delta) << ',' << fmt(r.norm) << ','
                  << fmt(r.averaged) << ',' << fmt(r.delta_bar) << '\n';
    }
    return count_flagged(t.rows) == 0 ? 0 : 1;
}

int run_compare(const std::vector<std::string> &inputs, const std::string &reference) {
    std::vector<hexsim::ResultTable> tables;
    std::size_t flagged = 0;
    for (const auto &path : inputs) {
        tables.push_back(hexsim::read_csv_file(path));
        flagged += count_flagged(tables.back().rows);
    }
    auto rep = hexsim::compare(tables, reference);
    std::cout << "theta_h,spread";
    if (!rep.rows.empty()) {
        for (const auto &[m, v] : rep.rows.front().values) {
            std::cout << ',' << m;
        }
    }
    if (!reference.empty()) {
        std::cout << ",max_abs_error_vs_" << reference;
    }
    std::cout << '\n';
    for (const auto &row : rep.rows) {
        std::cout << fmt(row.theta_h) << ',' << fmt(row.spread);
        for (const auto &[m, v] : row.values) {
            std::cout << ',' << fmt(v);
        }
        if (row.max_abs_error_vs_reference) {
            std::cout << ',' << fmt(*row.max_abs_error_vs_reference);
        }
        std::cout << '\n';
    }
    std::cout << "max_spread " << fmt(rep.max_spread) << '\n';
    if (!reference.empty()) {
        std::cout << "max_abs_error " << fmt(rep.max_abs_error) << '\n';
    }
    for (const auto &[pair, d] : rep.pairwise) {
        std::cout << "pair " << pair.first << ' ' << pair.second << ' ' << fmt(d) << '\n';
    }
    return flagged == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Kicked-Ising expectation values on heavy-hex lattices"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::size_t workers = 0;
    auto *sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
    sweep_cmd->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--out", out_path, "CSV output path (default: config output or stdout)");
    sweep_cmd->add_option("--workers", workers, "Concurrent sweep points");

    std::string in_path;
    std::string observable;
    auto *report_cmd = app.add_subcommand("report", "Convergence diagnostics per method and theta_h");
    report_cmd->add_option("--in", in_path, "Result CSV")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--observable", observable, "Observable the table must hold");

    std::vector<std::string> inputs;
    std::string reference;
    auto *compare_cmd = app.add_subcommand("compare", "Cross-method spread and error against a reference");
    compare_cmd->add_option("tables", inputs, "Result CSVs")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--reference", reference, "Reference method");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sweep_cmd) {
            return run_sweep(config_path, out_path, workers);
        }
        if (*report_cmd) {
            return run_report(in_path, observable);
        }
        return run_compare(inputs, reference);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
