// Copyright 2026 The hexsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Sweep harness: JSON run configuration, CSV result tables, convergence
// diagnostics and cross-method comparison.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "hexsim/circuit.hpp"
#include "hexsim/clifford.hpp"
#include "hexsim/errors.hpp"
#include "hexsim/lattice.hpp"
#include "hexsim/oracle.hpp"
#include "hexsim/parallel.hpp"
#include "hexsim/pauli_sum.hpp"
#include "hexsim/spd.hpp"
#include "hexsim/tn.hpp"

namespace hexsim {

inline constexpr const char *kCsvVersion = "hexsim-results v1";
inline constexpr const char *kCsvColumns =
    "method,theta_h,param_name,param_value,expectation,norm_psi,norm_o,norm_mix,peak_terms_or_maxbond,wall_time_s,"
    "flags";

/// Lattice: a generated heavy-hex patch or an edge-list file, optionally cut
/// down to a BFS fragment around `center` or around a shortest cycle.
struct LatticeSource {
    std::optional<std::pair<std::size_t, std::size_t>> heavy_hex;
    std::string file;
    std::optional<std::size_t> fragment_center;
    std::size_t fragment_count = 0;
    bool loop_fragment = false;

    Lattice build() const {
        Lattice lat = heavy_hex ? hexsim::heavy_hex(heavy_hex->first, heavy_hex->second) : load_lattice(file);
        if (loop_fragment) {
            return hexsim::loop_fragment(lat, fragment_count);
        }
        if (fragment_center) {
            return fragment(lat, *fragment_center, fragment_count);
        }
        return lat;
    }
};

struct RunConfig {
    LatticeSource lattice;
    std::string observable = "Z0";
    std::size_t steps = 5;
    bool extra_x_layer = false;
    /// Any of spd, peps, pepo, mix, exact.
    std::vector<std::string> methods;
    std::vector<double> thetas;
    std::vector<double> deltas;
    std::vector<std::size_t> chis;
    double kappa = 5e-6;
    double bp_tol = 5e-6;
    std::size_t max_iter = 500;
    double damping = 0.0;
    /// Random perturbation of the initial BP messages, drawn from `seed`.
    double bp_perturbation = 0.0;
    std::uint64_t seed = 0;
    std::string output;
    std::size_t max_terms = kDefaultMaxTerms;
    std::size_t statevector_cap = kStatevectorCap;
    std::size_t workers = 1;
    bool prune = true;
    bool record_wall_time = true;
};

inline std::vector<double> default_thetas() {
    std::vector<double> t;
    for (int k = 0; k <= 16; ++k) {
        t.push_back(k * std::numbers::pi / 32);
    }
    return t;
}

inline bool is_tn_method(const std::string &m) {
    return m == "peps" || m == "pepo" || m == "mix";
}

inline TnMethod tn_method_from(const std::string &m) {
    if (m == "peps") {
        return TnMethod::PEPS;
    }
    if (m == "pepo") {
        return TnMethod::PEPO;
    }
    if (m == "mix") {
        return TnMethod::MIX;
    }
    throw ArgumentError("unknown tensor-network method '" + m + "'");
}

/// Checks the invariants: one lattice source, non-empty grid, parameters per method.
inline void validate(const RunConfig &c) {
    if (c.lattice.heavy_hex.has_value() == !c.lattice.file.empty()) {
        throw ArgumentError("config needs exactly one lattice source (heavy_hex or file)");
    }
    if ((c.lattice.fragment_center || c.lattice.loop_fragment) && c.lattice.fragment_count == 0) {
        throw ArgumentError("fragment needs a positive count");
    }
    if (c.lattice.fragment_center && c.lattice.loop_fragment) {
        throw ArgumentError("choose either a centred fragment or a loop fragment");
    }
    if (c.thetas.empty()) {
        throw ArgumentError("theta_h list is empty");
    }
    if (c.methods.empty()) {
        throw ArgumentError("no methods given");
    }
    if (c.steps == 0) {
        throw ArgumentError("steps must be positive");
    }
    for (const auto &m : c.methods) {
        if (m == "spd") {
            if (c.deltas.empty()) {
                throw ArgumentError("method spd needs a delta list");
            }
            for (double d : c.deltas) {
                if (!(d >= 0)) {
                    throw ArgumentError("delta must be non-negative");
                }
            }
        } else if (is_tn_method(m)) {
            if (c.chis.empty()) {
                throw ArgumentError("method " + m + " needs a chi list");
            }
            for (auto chi : c.chis) {
                if (chi == 0) {
                    throw ArgumentError("chi must be positive");
                }
            }
        } else if (m != "exact") {
            throw ArgumentError("unknown method '" + m + "'");
        }
    }
    if (c.kappa < 0 || c.bp_tol <= 0 || c.max_iter == 0 || c.damping < 0 || c.damping >= 1 ||
        c.bp_perturbation < 0 || c.bp_perturbation >= 1) {
        throw ArgumentError("invalid kappa / bp_tol / max_iter / damping / bp_perturbation");
    }
}

/// Schema (all keys optional unless noted):
///   lattice: {heavy_hex: [rows, cols]} or {file: path} (required), plus
///            optional fragment: {center, count} or loop_fragment: count
///   observable, steps, extra_x_layer, methods (list) or method (string),
///   theta_h (radians) or theta_k (multiples of pi/32), default k = 0..16,
///   delta, chi (lists), kappa, bp_tol, max_iter, damping, bp_perturbation,
///   seed (drives bp_perturbation), output,
///   max_terms, statevector_cap, workers, prune, record_wall_time.
inline RunConfig config_from_json(const nlohmann::json &j) {
    using nlohmann::json;
    static const std::set<std::string> known = {
        "lattice", "observable", "steps",  "extra_x_layer", "methods", "method",          "theta_h",
        "theta_k", "delta",      "chi",    "kappa",         "bp_tol",  "max_iter",        "damping",
        "bp_perturbation", "seed", "output",     "max_terms", "statevector_cap", "workers", "prune", "record_wall_time"};
    if (!j.is_object()) {
        throw ArgumentError("config must be a JSON object");
    }
    for (const auto &[k, v] : j.items()) {
        if (!known.count(k)) {
            throw ArgumentError("unknown config key '" + k + "'");
        }
    }
    RunConfig c;
    if (!j.contains("lattice")) {
        throw ArgumentError("config needs a lattice");
    }
    const json &lj = j.at("lattice");
    if (lj.contains("heavy_hex")) {
        auto hh = lj.at("heavy_hex").get<std::vector<std::size_t>>();
        if (hh.size() != 2) {
            throw ArgumentError("heavy_hex takes [rows, cols]");
        }
        c.lattice.heavy_hex = std::make_pair(hh[0], hh[1]);
    }
    if (lj.contains("file")) {
        c.lattice.file = lj.at("file").get<std::string>();
    }
    if (lj.contains("fragment")) {
        c.lattice.fragment_center = lj.at("fragment").at("center").get<std::size_t>();
        c.lattice.fragment_count = lj.at("fragment").at("count").get<std::size_t>();
    }
    if (lj.contains("loop_fragment")) {
        c.lattice.loop_fragment = true;
        c.lattice.fragment_count = lj.at("loop_fragment").get<std::size_t>();
    }
    c.observable = j.value("observable", c.observable);
    c.steps = j.value("steps", c.steps);
    c.extra_x_layer = j.value("extra_x_layer", c.extra_x_layer);
    if (j.contains("methods") && j.contains("method")) {
        throw ArgumentError("give either method or methods");
    }
    if (j.contains("methods")) {
        c.methods = j.at("methods").get<std::vector<std::string>>();
    } else if (j.contains("method")) {
        c.methods = {j.at("method").get<std::string>()};
    }
    if (j.contains("theta_h") && j.contains("theta_k")) {
        throw ArgumentError("give either theta_h or theta_k");
    }
    if (j.contains("theta_h")) {
        c.thetas = j.at("theta_h").get<std::vector<double>>();
    } else if (j.contains("theta_k")) {
        for (double k : j.at("theta_k").get<std::vector<double>>()) {
            c.thetas.push_back(k * std::numbers::pi / 32);
        }
    } else {
        c.thetas = default_thetas();
    }
    if (j.contains("delta")) {
        c.deltas = j.at("delta").get<std::vector<double>>();
    }
    if (j.contains("chi")) {
        c.chis = j.at("chi").get<std::vector<std::size_t>>();
    }
    c.kappa = j.value("kappa", c.kappa);
    c.bp_tol = j.value("bp_tol", c.bp_tol);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.damping = j.value("damping", c.damping);
    c.bp_perturbation = j.value("bp_perturbation", c.bp_perturbation);
    c.seed = j.value("seed", c.seed);
    c.output = j.value("output", c.output);
    c.max_terms = j.value("max_terms", max_terms_from_env(c.max_terms));
    c.statevector_cap = j.value("statevector_cap", c.statevector_cap);
    c.workers = j.value("workers", c.workers);
    c.prune = j.value("prune", c.prune);
    c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
    validate(c);
    return c;
}

inline RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open config " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what(), 0);
    }
    RunConfig c = config_from_json(j);
    // Relative lattice files resolve against the config's directory.
    if (!c.lattice.file.empty() && std::filesystem::path(c.lattice.file).is_relative()) {
        c.lattice.file = (std::filesystem::path(path).parent_path() / c.lattice.file).string();
    }
    return c;
}

struct ResultRow {
    std::string method;
    double theta_h = 0.0;
    std::string param_name = "none";
    double param_value = 0.0;
    double expectation = std::numeric_limits<double>::quiet_NaN();
    double norm_psi = 1.0;
    double norm_o = 1.0;
    double norm_mix = 1.0;
    std::size_t peak = 0;
    double wall_time = 0.0;
    std::vector<std::string> flags;

    bool flagged() const {
        return !flags.empty();
    }
};

namespace detail {

inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

/// Flags are ';'-joined and may not contain separators.
inline std::string clean_flag(std::string f) {
    for (char &ch : f) {
        if (ch == ',' || ch == ';' || ch == '\n' || ch == '\r') {
            ch = ' ';
        }
    }
    return f;
}

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

inline double parse_double(const std::string &s, std::size_t line) {
    if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception &) {
        throw ParseError("bad number '" + s + "'", line);
    }
}

}  // namespace detail

inline std::string csv_line(const ResultRow &r) {
    std::string flags;
    for (std::size_t k = 0; k < r.flags.size(); ++k) {
        flags += (k ? ";" : "") + detail::clean_flag(r.flags[k]);
    }
    std::ostringstream s;
    s << r.method << ',' << detail::format_double(r.theta_h) << ',' << r.param_name << ','
      << detail::format_double(r.param_value) << ',' << detail::format_double(r.expectation) << ','
      << detail::format_double(r.norm_psi) << ',' << detail::format_double(r.norm_o) << ','
      << detail::format_double(r.norm_mix) << ',' << r.peak << ',' << detail::format_double(r.wall_time) << ','
      << flags;
    return s.str();
}

inline void write_csv_header(std::ostream &out, const std::string &observable) {
    out << "# " << kCsvVersion << " observable=" << observable << '\n' << kCsvColumns << '\n';
}

struct ResultTable {
    std::string observable;
    std::vector<ResultRow> rows;
};

inline ResultTable read_csv(std::istream &in) {
    ResultTable t;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            auto pos = line.find("observable=");
            if (line.find(kCsvVersion) != std::string::npos && pos != std::string::npos) {
                t.observable = line.substr(pos + 11);
            }
            continue;
        }
        if (!header) {
            if (line != kCsvColumns) {
                throw ParseError("unexpected CSV columns", line_no);
            }
            header = true;
            continue;
        }
        auto f = detail::split(line, ',');
        if (f.size() != 11) {
            throw ParseError("expected 11 fields, got " + std::to_string(f.size()), line_no);
        }
        ResultRow r;
        r.method = f[0];
        r.theta_h = detail::parse_double(f[1], line_no);
        r.param_name = f[2];
        r.param_value = detail::parse_double(f[3], line_no);
        r.expectation = detail::parse_double(f[4], line_no);
        r.norm_psi = detail::parse_double(f[5], line_no);
        r.norm_o = detail::parse_double(f[6], line_no);
        r.norm_mix = detail::parse_double(f[7], line_no);
        r.peak = static_cast<std::size_t>(detail::parse_double(f[8], line_no));
        r.wall_time = detail::parse_double(f[9], line_no);
        if (!f[10].empty()) {
            r.flags = detail::split(f[10], ';');
        }
        t.rows.push_back(std::move(r));
    }
    if (!header) {
        throw ParseError("CSV has no column header", line_no);
    }
    return t;
}

inline ResultTable read_csv_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open " + path);
    }
    return read_csv(in);
}

struct SweepPoint {
    std::string method;
    double theta = 0.0;
    std::string param_name = "none";
    double param_value = 0.0;
};

inline std::vector<SweepPoint> sweep_points(const RunConfig &c) {
    std::vector<SweepPoint> pts;
    for (const auto &m : c.methods) {
        for (double th : c.thetas) {
            if (m == "spd") {
                for (double d : c.deltas) {
                    pts.push_back({m, th, "delta", d});
                }
            } else if (is_tn_method(m)) {
                for (auto chi : c.chis) {
                    pts.push_back({m, th, "chi", static_cast<double>(chi)});
                }
            } else {
                pts.push_back({m, th, "none", 0.0});
            }
        }
    }
    return pts;
}

/// Runs one point; failures become flags on the row.
inline ResultRow run_point(const RunConfig &c, const Lattice &lat, const SweepPoint &p) {
    ResultRow row;
    row.method = p.method;
    row.theta_h = p.theta;
    row.param_name = p.param_name;
    row.param_value = p.param_value;
    auto start = std::chrono::steady_clock::now();
    try {
        Circuit circ = kicked_ising(lat, p.theta, c.steps, c.extra_x_layer);
        PauliSum o = parse_observable(c.observable, lat.num_nodes);
        if (p.method == "exact") {
            row.expectation = statevector_expectation(circ, o, c.statevector_cap);
        } else if (p.method == "spd") {
            Circuit pruned = c.prune ? lightcone_prune(circ, o) : circ;
            SpdOptions opt;
            opt.delta = p.param_value;
            opt.max_terms = c.max_terms;
            SpdResult r = run_spd(recompile(pruned, o), opt);
            row.expectation = r.expectation;
            const double n0 = frobenius_norm(o);
            row.norm_o = n0 > 0 ? r.frobenius_norm / n0 : 0.0;
            row.norm_mix = row.norm_o;
            row.peak = r.peak_terms;
            if (r.max_imaginary > 1e-8 * std::max(1.0, std::abs(r.expectation))) {
                row.flags.push_back("imaginary_residue");
            }
        } else {
            TnOptions opt;
            opt.chi = static_cast<std::size_t>(p.param_value);
            opt.kappa = c.kappa;
            opt.bp.tol = c.bp_tol;
            opt.bp.max_iter = c.max_iter;
            opt.bp.damping = c.damping;
            opt.bp.perturbation = c.bp_perturbation;
            opt.bp.seed = c.seed;
            opt.prune = c.prune;
            const TnMethod m = tn_method_from(p.method);
            double value = 0.0;
            row.norm_psi = row.norm_o = row.norm_mix = std::numeric_limits<double>::infinity();
            // Sums of words by linearity; the smallest per-term norm is reported.
            for (std::size_t t = 0; t < o.size(); ++t) {
                PauliSum term = PauliSum::single(o.term_word(t), o.coeff(t));
                TnResult r = run_tn(circ, term, m, opt);
                value += r.expectation;
                row.norm_psi = std::min(row.norm_psi, r.n_psi);
                row.norm_o = std::min(row.norm_o, r.n_o);
                row.norm_mix = std::min(row.norm_mix, r.n_mix);
                row.peak = std::max(row.peak, r.max_bond);
                for (const auto &f : r.flags) {
                    if (std::find(row.flags.begin(), row.flags.end(), f) == row.flags.end()) {
                        row.flags.push_back(f);
                    }
                }
            }
            if (o.size() == 0) {
                row.norm_psi = row.norm_o = row.norm_mix = 1.0;
            }
            row.expectation = value;
        }
    } catch (const CapacityError &e) {
        row.flags.push_back(std::string("capacity: ") + e.what());
    } catch (const std::exception &e) {
        row.flags.push_back(std::string("error: ") + e.what());
    }
    if (c.record_wall_time) {
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return row;
}

/// Runs every point, up to `workers` at a time. Rows reach `out` in point
/// order through one writer, flushed as soon as their predecessors are done.
inline std::vector<ResultRow> sweep(const RunConfig &c, std::ostream *out = nullptr) {
    validate(c);
    const Lattice lat = c.lattice.build();
    const auto points = sweep_points(c);
    if (out) {
        write_csv_header(*out, c.observable);
        out->flush();
    }
    std::vector<std::optional<ResultRow>> done(points.size());
    std::size_t next_point = 0;
    std::size_t next_write = 0;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            std::size_t idx;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next_point >= points.size()) {
                    return;
                }
                idx = next_point++;
            }
            ResultRow row = run_point(c, lat, points[idx]);
            std::lock_guard<std::mutex> lock(mu);
            done[idx] = std::move(row);
            while (next_write < points.size() && done[next_write]) {
                if (out) {
                    *out << csv_line(*done[next_write]) << '\n';
                    out->flush();
                }
                ++next_write;
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(c.workers ? c.workers : default_workers(),
                                                                  points.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    std::vector<ResultRow> rows;
    for (auto &r : done) {
        rows.push_back(std::move(*r));
    }
    return rows;
}

/// Diagnostics over the three most accurate points of one series. Values
/// enter as offsets from the top value, so a constant series gives exact zeros.
///
///   v1, v2, v3: expectations, v3 the most accurate; N: its norm_mix
///   d_i    = v_i - v3,  dm = (d1 + d2 + d3) / 3
///   sigma  = sqrt(((d1 - dm)^2 + (d2 - dm)^2 + (d3 - dm)^2) / 3)
///   x_i    = 1 / chi for tensor networks, delta for SPD
///   xm     = (x1 + x2 + x3) / 3
///   sxx    = (x1 - xm)^2 + (x2 - xm)^2 + (x3 - xm)^2
///   sxy    = (x1 - xm)(d1 - dm) + (x2 - xm)(d2 - dm) + (x3 - xm)(d3 - dm)
///   slope  = sxy / sxx
///   intercept = v3 + (dm - slope * xm)  (value at x = 0)
///   delta  = |dm - slope * xm|
///   avg    = (v3 + v3 / N) / 2,  delta_bar = |v3 - avg|
struct ConvergenceReport {
    bool available = false;
    std::string reason;
    std::string method;
    double theta_h = 0.0;
    double top_param = 0.0;
    double top_value = 0.0;
    double sigma = 0.0;
    double fit_slope = 0.0;
    double fit_intercept = 0.0;
    double delta = 0.0;
    double norm = 1.0;
    double averaged = 0.0;
    double delta_bar = 0.0;
};

/// Abscissa of the linear fit; x = 0 is the exact limit.
inline double fit_abscissa(const std::string &param_name, double value) {
    if (param_name == "chi") {
        return 1.0 / value;
    }
    if (param_name == "delta") {
        return value;
    }
    throw ArgumentError("no convergence parameter '" + param_name + "'");
}

/// `series` holds one method at one theta_h, in any order.
inline ConvergenceReport convergence_report(std::vector<ResultRow> series) {
    ConvergenceReport r;
    if (!series.empty()) {
        r.method = series.front().method;
        r.theta_h = series.front().theta_h;
    }
    if (!series.empty() && series.front().param_name == "none") {
        r.reason = "method has no convergence parameter";
        return r;
    }
    if (series.size() < 3) {
        r.reason = "fewer than 3 points";
        return r;
    }
    for (const auto &row : series) {
        if (row.param_name != series.front().param_name || row.method != r.method || row.theta_h != r.theta_h) {
            throw ArgumentError("series mixes methods, parameters or theta_h values");
        }
    }
    // Most accurate last: large chi, small delta.
    const std::string pname = series.front().param_name;
    std::sort(series.begin(), series.end(), [&](const ResultRow &a, const ResultRow &b) {
        return fit_abscissa(pname, a.param_value) > fit_abscissa(pname, b.param_value);
    });
    const ResultRow &p1 = series[series.size() - 3];
    const ResultRow &p2 = series[series.size() - 2];
    const ResultRow &p3 = series[series.size() - 1];
    const double v1 = p1.expectation;
    const double v2 = p2.expectation;
    const double v3 = p3.expectation;
    const double x1 = fit_abscissa(pname, p1.param_value);
    const double x2 = fit_abscissa(pname, p2.param_value);
    const double x3 = fit_abscissa(pname, p3.param_value);
    const double d1 = v1 - v3;
    const double d2 = v2 - v3;
    const double d3 = v3 - v3;
    const double dm = (d1 + d2 + d3) / 3;
    r.sigma = std::sqrt(((d1 - dm) * (d1 - dm) + (d2 - dm) * (d2 - dm) + (d3 - dm) * (d3 - dm)) / 3);
    const double xm = (x1 + x2 + x3) / 3;
    const double sxx = (x1 - xm) * (x1 - xm) + (x2 - xm) * (x2 - xm) + (x3 - xm) * (x3 - xm);
    const double sxy = (x1 - xm) * (d1 - dm) + (x2 - xm) * (d2 - dm) + (x3 - xm) * (d3 - dm);
    if (sxx == 0.0) {
        r.reason = "repeated parameter values";
        return r;
    }
    r.fit_slope = sxy / sxx;
    const double shift = dm - r.fit_slope * xm;
    r.fit_intercept = v3 + shift;
    r.top_param = p3.param_value;
    r.top_value = v3;
    r.delta = std::abs(shift);
    r.norm = p3.norm_mix;
    r.averaged = (v3 + v3 / r.norm) / 2;
    r.delta_bar = std::abs(v3 - r.averaged);
    r.available = true;
    return r;
}

/// One report per (method, theta_h) series in the table.
inline std::vector<ConvergenceReport> convergence_reports(const ResultTable &t) {
    std::map<std::pair<std::string, double>, std::vector<ResultRow>> groups;
    for (const auto &row : t.rows) {
        groups[{row.method, row.theta_h}].push_back(row);
    }
    std::vector<ConvergenceReport> out;
    for (auto &[key, rows] : groups) {
        out.push_back(convergence_report(rows));
    }
    return out;
}

struct ComparisonRow {
    double theta_h = 0.0;
    /// Most accurate value of each method at this theta_h.
    std::map<std::string, double> values;
    double spread = 0.0;
    std::optional<double> max_abs_error_vs_reference;
};

struct ComparisonReport {
    std::string reference;
    std::vector<ComparisonRow> rows;
    double max_spread = 0.0;
    double max_abs_error = 0.0;
    /// Largest |a - b| per method pair over theta_h.
    std::map<std::pair<std::string, std::string>, double> pairwise;
};

/// Most accurate row of each (method, theta_h): largest chi, smallest delta.
inline std::map<std::pair<std::string, double>, ResultRow> best_rows(const std::vector<ResultRow> &rows) {
    std::map<std::pair<std::string, double>, ResultRow> best;
    for (const auto &row : rows) {
        auto key = std::make_pair(row.method, row.theta_h);
        auto it = best.find(key);
        if (it == best.end()) {
            best.emplace(key, row);
            continue;
        }
        if (row.param_name != "none" &&
            fit_abscissa(row.param_name, row.param_value) < fit_abscissa(row.param_name, it->second.param_value)) {
            it->second = row;
        }
    }
    return best;
}

/// Per-theta_h spread across methods and error against `reference`.
inline ComparisonReport compare(const std::vector<ResultTable> &tables, const std::string &reference) {
    std::vector<ResultRow> all;
    for (const auto &t : tables) {
        all.insert(all.end(), t.rows.begin(), t.rows.end());
    }
    auto best = best_rows(all);
    std::set<std::string> methods;
    std::set<double> thetas;
    for (const auto &[key, row] : best) {
        methods.insert(key.first);
        thetas.insert(key.second);
    }
    if (!reference.empty() && !methods.count(reference)) {
        throw ArgumentError("reference method '" + reference + "' not present");
    }
    std::string missing;
    for (const auto &m : methods) {
        for (double th : thetas) {
            if (!best.count({m, th})) {
                missing += " " + m + "@" + detail::format_double(th);
            }
        }
    }
    if (!missing.empty()) {
        throw ArgumentError("theta_h grids differ; missing points:" + missing);
    }
    ComparisonReport rep;
    rep.reference = reference;
    for (double th : thetas) {
        ComparisonRow cr;
        cr.theta_h = th;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto &m : methods) {
            double v = best.at({m, th}).expectation;
            cr.values[m] = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        cr.spread = hi - lo;
        if (!reference.empty()) {
            double err = 0.0;
            for (const auto &[m, v] : cr.values) {
                err = std::max(err, std::abs(v - cr.values.at(reference)));
            }
            cr.max_abs_error_vs_reference = err;
            rep.max_abs_error = std::max(rep.max_abs_error, err);
        }
        for (auto a = cr.values.begin(); a != cr.values.end(); ++a) {
            for (auto b = std::next(a); b != cr.values.end(); ++b) {
                auto &slot = rep.pairwise[{a->first, b->first}];
                slot = std::max(slot, std::abs(a->second - b->second));
            }
        }
        rep.max_spread = std::max(rep.max_spread, cr.spread);
        rep.rows.push_back(std::move(cr));
    }
    return rep;
}

}  // namespace hexsim
