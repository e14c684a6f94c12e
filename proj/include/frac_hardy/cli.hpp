#pragma once

/**
 * @file cli.hpp
 * @brief Run configuration, grid parsing, command dispatch and JSON/CSV/table output.
 *
 * Exit codes: 0 success, 1 validation error, 2 a violation verdict, 3 nonconvergence
 * (also variance blow-up, dominant tails and inconclusive verdicts).
 */

#include "frac_hardy/asymptotics.hpp"
#include "frac_hardy/bounds.hpp"
#include "frac_hardy/constants.hpp"
#include "frac_hardy/geometry.hpp"
#include "frac_hardy/kernel.hpp"
#include "frac_hardy/parallel.hpp"
#include "frac_hardy/rayleigh.hpp"
#include "frac_hardy/supersol.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace frac_hardy::cli {

inline constexpr int kSchemaVersion = 1;

using Row = nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    int dim = 1;
    /// Grids: "x", "a,b,c" or "lo:hi:count". Empty means the command default.
    std::string s, p, r;
    bool geometric = false;
    std::string beta = "hardy";
    /// Multiplier of the weighted term in verify-supersol; "auto" uses C(beta).
    std::string lambda = "auto";
    std::string domain = "punctured";
    std::string punctures, center, sides;
    double radius = 1.0;
    std::string trial = "bump", trial_center, quotient = "hardy";
    double trial_radius = 0.5, eps = 0.1, inner = 1e-3, outer = 1e3;
    std::string trial_beta = "hardy";
    double amplitude = 1.0;
    std::size_t tests = 20;
    std::uint64_t seed = 0, samples = 200000;
    /// 0 keeps the module default.
    double rel_tol = 0.0;
    std::string format = "json", output;
};

inline const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c{"constant", "cbeta",  "kernel",   "kpn",           "limit-s1",
                                            "limit-pinf", "bounds", "rayleigh", "verify-supersol", "scan"};
    return c;
}

// ---------------------------------------------------------------------------------------------
// Parsing helpers

namespace detail {

[[nodiscard]] inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

[[nodiscard]] inline double to_double(const std::string& t, const std::string& what)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(t, &used);
    } catch (...) {
        fail(ErrorKind::invalid_config, "cannot parse " + what + " value '" + t + "'");
    }
    while (used < t.size() && std::isspace(static_cast<unsigned char>(t[used]))) ++used;
    require(used == t.size() && std::isfinite(v), ErrorKind::invalid_config, "cannot parse " + what + " value '" + t + "'");
    return v;
}

} // namespace detail

enum class GridKind { linear_only, toward_one, toward_infinity };

/**
 * @brief Parses a grid. With geometric set, lo:hi:count is geometric in 1 - x for
 * toward_one (s grids) and in x for toward_infinity (p grids).
 */
[[nodiscard]] inline std::vector<double> parse_grid(const std::string& text, GridKind kind, bool geometric,
                                                    const std::string& what)
{
    require(!text.empty(), ErrorKind::invalid_config, what + " grid is empty");
    const auto parts = detail::split(text, ':');
    if (parts.size() == 1) {
        std::vector<double> out;
        for (const auto& t : detail::split(text, ',')) out.push_back(detail::to_double(t, what));
        require(!out.empty(), ErrorKind::invalid_config, what + " grid is empty");
        return out;
    }
    require(parts.size() == 3, ErrorKind::invalid_config, what + " grid must be lo:hi:count");
    const double lo = detail::to_double(parts[0], what), hi = detail::to_double(parts[1], what);
    const double cnt = detail::to_double(parts[2], what);
    require(cnt >= 1 && cnt == std::floor(cnt) && cnt <= 100000, ErrorKind::invalid_config, what + " grid count must be a positive integer");
    const int n = static_cast<int>(cnt);
    std::vector<double> out;
    for (int k = 0; k < n; ++k) {
        const double f = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
        double v = lo + f * (hi - lo);
        if (geometric && kind == GridKind::toward_one) {
            require(lo < 1 && hi < 1, ErrorKind::invalid_config, what + " geometric grid needs values below 1");
            v = 1.0 - (1.0 - lo) * std::pow((1.0 - hi) / (1.0 - lo), f);
        } else if (geometric && kind == GridKind::toward_infinity) {
            require(lo > 0 && hi > 0, ErrorKind::invalid_config, what + " geometric grid needs positive values");
            v = lo * std::pow(hi / lo, f);
        }
        if (k == n - 1) v = hi;
        out.push_back(v);
    }
    return out;
}

/// Points: "a;b;c" with comma-separated coordinates; for N = 1 also "a,b,c".
[[nodiscard]] inline std::vector<Point> parse_points(const std::string& text, int dim, const std::string& what)
{
    std::vector<Point> out;
    if (text.empty()) return out;
    if (dim == 1 && text.find(';') == std::string::npos) {
        for (const auto& t : detail::split(text, ',')) out.push_back({detail::to_double(t, what)});
        return out;
    }
    for (const auto& item : detail::split(text, ';')) {
        Point pt;
        for (const auto& t : detail::split(item, ',')) pt.push_back(detail::to_double(t, what));
        require(static_cast<int>(pt.size()) == dim, ErrorKind::invalid_config, what + " point has the wrong dimension");
        out.push_back(std::move(pt));
    }
    return out;
}

[[nodiscard]] inline Point parse_point(const std::string& text, int dim, const Point& fallback, const std::string& what)
{
    if (text.empty()) return fallback;
    auto pts = parse_points(text, dim, what);
    require(pts.size() == 1, ErrorKind::invalid_config, what + " must be a single point");
    return pts.front();
}

[[nodiscard]] inline DomainModel build_domain(const RunConfig& c)
{
    const Point origin(c.dim, 0.0);
    DomainModel d;
    if (c.domain == "punctured") {
        auto pts = parse_points(c.punctures, c.dim, "puncture");
        if (pts.empty()) pts.push_back(origin);
        d = DomainModel::punctured(c.dim, std::move(pts));
    } else if (c.domain == "ball") {
        d = DomainModel::ball(c.dim, c.radius, parse_point(c.center, c.dim, origin, "centre"));
    } else if (c.domain == "box") {
        std::vector<double> sides;
        for (const auto& t : detail::split(c.sides.empty() ? "1" : c.sides, ',')) sides.push_back(detail::to_double(t, "side"));
        if (sides.size() == 1) sides.assign(c.dim, sides[0]);
        require(static_cast<int>(sides.size()) == c.dim, ErrorKind::invalid_config, "box needs one side per dimension");
        d = DomainModel::box(std::move(sides));
    } else if (c.domain == "half_space") {
        d = DomainModel::half_space(c.dim);
    } else {
        fail(ErrorKind::invalid_config, "unknown domain '" + c.domain + "'");
    }
    geometry::validate(d);
    return d;
}

/// "hardy" = (sp-N)/p, "mid" = half of (sp-N)/(p-1), or a number.
[[nodiscard]] inline double resolve_beta(const std::string& text, const FracParams& fp)
{
    if (text == "hardy") return constants::hardy_beta(fp);
    if (text == "mid") return 0.5 * constants::beta_upper(fp);
    return detail::to_double(text, "beta");
}

[[nodiscard]] inline TrialFunction build_trial(const RunConfig& c, const FracParams& fp)
{
    Point fallback(c.dim, 0.0);
    fallback[0] = 1.0;
    const Point ctr = parse_point(c.trial_center, c.dim, fallback, "trial centre");
    if (c.trial == "bump") return TrialFunction::bump(ctr, c.trial_radius, c.amplitude);
    if (c.trial == "cone") return TrialFunction::cone(ctr, c.trial_radius, c.eps, fp.s);
    if (c.trial == "power") return TrialFunction::power_distance(ctr, resolve_beta(c.trial_beta, fp), c.inner, c.outer);
    fail(ErrorKind::invalid_config, "unknown trial '" + c.trial + "'");
}

// ---------------------------------------------------------------------------------------------
// Output

[[nodiscard]] inline std::string format_double(double v)
{
    if (!std::isfinite(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string csv_field(const nlohmann::ordered_json& v)
{
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

/// Header from the first row's keys, then one line per row; schema_version is the last column.
[[nodiscard]] inline std::string to_csv(const std::vector<Row>& rows)
{
    std::ostringstream out;
    if (rows.empty()) return "schema_version\n";
    bool first = true;
    for (const auto& [k, v] : rows.front().items()) {
        out << (first ? "" : ",") << k;
        first = false;
    }
    out << ",schema_version\n";
    for (const auto& row : rows) {
        first = true;
        for (const auto& [k, v] : row.items()) {
            out << (first ? "" : ",") << csv_field(v);
            first = false;
        }
        out << "," << kSchemaVersion << "\n";
    }
    return out.str();
}

[[nodiscard]] inline std::string to_table(const std::vector<Row>& rows)
{
    if (rows.empty()) return "";
    std::vector<std::string> head;
    for (const auto& [k, v] : rows.front().items()) head.push_back(k);
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(head.size());
    for (std::size_t j = 0; j < head.size(); ++j) width[j] = head[j].size();
    for (const auto& row : rows) {
        std::vector<std::string> line;
        std::size_t j = 0;
        for (const auto& [k, v] : row.items()) {
            std::string s;
            if (v.is_number_float()) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
                s = std::isfinite(v.get<double>()) ? buf : "-";
            } else {
                s = v.is_null() ? "-" : csv_field(v);
            }
            width[j] = std::max(width[j], s.size());
            line.push_back(std::move(s));
            ++j;
        }
        cells.push_back(std::move(line));
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& line) {
        for (std::size_t j = 0; j < line.size(); ++j) {
            out << (j ? "  " : "") << std::string(width[j] - line[j].size(), ' ') << line[j];
        }
        out << "\n";
    };
    emit(head);
    for (const auto& line : cells) emit(line);
    return out.str();
}

[[nodiscard]] inline nlohmann::ordered_json number_or_null(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

// ---------------------------------------------------------------------------------------------
// Commands

struct Outcome {
    std::vector<Row> rows;
    int exit_code = 0;
};

[[nodiscard]] inline int exit_code_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::nonconvergent:
    case ErrorKind::variance_blowup:
    case ErrorKind::tail_dominates: return 3;
    default: return 1;
    }
}

namespace detail {

[[nodiscard]] inline quad::QuadSpec quad_spec(const RunConfig& c, quad::QuadSpec base)
{
    if (c.rel_tol > 0) base.rel_tol = c.rel_tol;
    quad::validate(base);
    return base;
}

[[nodiscard]] inline std::vector<double> s_grid(const RunConfig& c, const std::string& fallback)
{
    return parse_grid(c.s.empty() ? fallback : c.s, GridKind::toward_one, c.geometric, "s");
}

[[nodiscard]] inline std::vector<double> p_grid(const RunConfig& c, const std::string& fallback)
{
    return parse_grid(c.p.empty() ? fallback : c.p, GridKind::toward_infinity, c.geometric, "p");
}

[[nodiscard]] inline std::vector<FracParams> param_grid(const RunConfig& c)
{
    std::vector<FracParams> out;
    for (double s : s_grid(c, "0.9"))
        for (double p : p_grid(c, "2")) out.push_back({c.dim, s, p});
    return out;
}

[[nodiscard]] inline Row base_row(const FracParams& fp)
{
    Row r;
    r["N"] = fp.dim;
    r["s"] = fp.s;
    r["p"] = fp.p;
    return r;
}

[[nodiscard]] inline std::string point_text(const Point& x)
{
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ";" : "") + format_double(x[i]);
    return s;
}

/// Runs fn over the grid in parallel; rows come back in grid order. Errors become null rows.
template <class Fn>
[[nodiscard]] Outcome run_grid(const std::vector<FracParams>& grid, Fn&& fn, const std::vector<std::string>& keys)
{
    Outcome out;
    out.rows.resize(grid.size());
    std::vector<int> codes(grid.size(), 0);
    std::vector<std::string> msgs(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        try {
            out.rows[i] = fn(grid[i]);
        } catch (const Error& e) {
            Row r = base_row(grid[i]);
            for (const auto& k : keys) r[k] = nullptr;
            out.rows[i] = std::move(r);
            codes[i] = exit_code_for(e.kind());
            msgs[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (codes[i] == 0) continue;
        std::cerr << "N=" << grid[i].dim << " s=" << format_double(grid[i].s) << " p=" << format_double(grid[i].p) << ": "
                  << msgs[i] << "\n";
        out.exit_code = std::max(out.exit_code, codes[i]);
    }
    return out;
}

inline Outcome cmd_constant(const RunConfig& c)
{
    const auto spec = quad_spec(c, {});
    return run_grid(
        param_grid(c),
        [&](const FracParams& fp) {
            const auto h = constants::hardy_constant(fp, spec);
            Row r = base_row(fp);
            r["value"] = h.value.value;
            r["error"] = h.value.error;
            r["method"] = std::string(to_string(h.representation));
            r["cross_check"] = h.cross_check.value;
            return r;
        },
        {"value", "error", "method", "cross_check"});
}

inline Outcome cmd_cbeta(const RunConfig& c)
{
    const auto spec = quad_spec(c, {});
    return run_grid(
        param_grid(c),
        [&](const FracParams& fp) {
            const BetaExponent be{resolve_beta(c.beta, fp), fp};
            const auto e = constants::c_beta(be, spec);
            Row r = base_row(fp);
            r["beta"] = be.beta;
            r["value"] = e.value;
            r["error"] = e.error;
            return r;
        },
        {"beta", "value", "error"});
}

inline Outcome cmd_kernel(const RunConfig& c)
{
    const auto rs = parse_grid(c.r.empty() ? "0:0.9:10" : c.r, GridKind::linear_only, false, "r");
    std::vector<FracParams> grid;
    std::vector<double> rv;
    for (const auto& fp : param_grid(c))
        for (double r : rs) {
            grid.push_back(fp);
            rv.push_back(r);
        }
    Outcome out;
    out.rows.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto& fp = grid[i];
        Row row = base_row(fp);
        row["r"] = rv[i];
        const auto direct = kernel::phi(fp, rv[i]);
        row["phi_direct"] = direct.value;
        if (fp.dim >= 2) {
            const auto g = kernel::g_of_t(fp, rv[i] * rv[i]);
            const double hyp = specfun::sphere_area(fp.dim - 2).value * g.value;
            row["phi_hypergeometric"] = hyp;
            row["rel_diff"] = std::fabs(hyp - direct.value) / direct.value;
        } else {
            row["phi_hypergeometric"] = nullptr;
            row["rel_diff"] = nullptr;
        }
        out.rows[i] = std::move(row);
    });
    return out;
}

inline Outcome cmd_kpn(const RunConfig& c)
{
    Outcome out;
    for (double p : p_grid(c, "2")) {
        const auto k = constants::k_pn(c.dim, p);
        Row r;
        r["N"] = c.dim;
        r["p"] = p;
        r["value"] = k.value;
        r["error"] = k.error;
        out.rows.push_back(std::move(r));
    }
    return out;
}

inline Row limit_summary(Row r, const asymptotics::LimitReport& rep)
{
    r["extrapolated"] = number_or_null(rep.extrapolated.value);
    r["extrapolated_error"] = number_or_null(rep.extrapolated.error);
    r["target"] = rep.target;
    r["converged"] = rep.converged;
    r["monotone"] = rep.sequence_monotone_flag;
    return r;
}

inline Outcome cmd_limit_s1(const RunConfig& c)
{
    std::vector<double> sg;
    if (c.s.empty()) sg = asymptotics::default_s_grid();
    else sg = s_grid(c, "");
    const auto spec = quad_spec(c, {});
    Outcome out;
    for (double p : p_grid(c, "2")) {
        const auto rep = asymptotics::limit_s_to_1(c.dim, p, sg, 0.01, spec);
        for (std::size_t i = 0; i < rep.samples.size(); ++i) {
            Row r;
            r["N"] = c.dim;
            r["p"] = p;
            r["s"] = rep.samples[i].first;
            r["scaled_h"] = rep.samples[i].second;
            r["error"] = rep.sample_errors[i];
            out.rows.push_back(limit_summary(std::move(r), rep));
        }
    }
    return out;
}

inline Outcome cmd_limit_pinf(const RunConfig& c)
{
    const auto pg = p_grid(c, "2,4,8,16,32,64,128");
    const auto spec = quad_spec(c, {});
    Outcome out;
    for (double s : s_grid(c, "0.75")) {
        const auto rep = asymptotics::limit_p_to_inf(c.dim, s, pg, 0.1, spec);
        for (std::size_t i = 0; i < rep.samples.size(); ++i) {
            Row r;
            r["N"] = c.dim;
            r["s"] = s;
            r["p"] = rep.samples[i].first;
            r["root"] = rep.samples[i].second;
            r["error"] = rep.sample_errors[i];
            r["chain_bound"] = rep.chain_bounds[i];
            r = limit_summary(std::move(r), rep);
            r["chain_bound_holds"] = rep.chain_bound_holds;
            out.rows.push_back(std::move(r));
        }
    }
    return out;
}

inline Outcome cmd_bounds(const RunConfig& c)
{
    const auto d = build_domain(c);
    const auto spec = quad_spec(c, {});
    return run_grid(
        param_grid(c),
        [&](const FracParams& fp) {
            const auto rep = bounds::eigenvalue_lower_bounds(fp, d, spec);
            Row r = base_row(fp);
            r["domain"] = std::string(to_string(d.kind));
            r["inradius_bound"] = rep.inradius_bound.value;
            r["inradius_error"] = rep.inradius_bound.error;
            r["cheeger_bound"] = rep.cheeger_bound ? nlohmann::ordered_json(rep.cheeger_bound->value) : nullptr;
            r["fractional_cheeger_bound"] =
                rep.fractional_cheeger_bound ? nlohmann::ordered_json(rep.fractional_cheeger_bound->value) : nullptr;
            r["fractional_cheeger_heuristic"] = rep.fractional_cheeger_heuristic;
            r["improved_classical"] = rep.improved_classical ? nlohmann::ordered_json(rep.improved_classical->value) : nullptr;
            r["lambda_s_infinity"] = rep.lambda_s_infinity;
            return r;
        },
        {"domain", "inradius_bound", "inradius_error", "cheeger_bound", "fractional_cheeger_bound",
         "fractional_cheeger_heuristic", "improved_classical", "lambda_s_infinity"});
}

inline Outcome cmd_rayleigh(const RunConfig& c)
{
    const auto d = build_domain(c);
    require(c.quotient == "hardy" || c.quotient == "poincare", ErrorKind::invalid_config, "quotient must be hardy or poincare");
    RayleighOptions opt;
    opt.quad = quad_spec(c, opt.quad);
    opt.mc.samples = c.samples;
    opt.mc.seed = c.seed;
    return run_grid(
        param_grid(c),
        [&](const FracParams& fp) {
            const auto u = build_trial(c, fp);
            const auto q = c.quotient == "hardy" ? rayleigh::hardy_quotient(fp, d, u, opt)
                                                 : rayleigh::poincare_quotient(fp, d, u, opt);
            Row r = base_row(fp);
            r["domain"] = std::string(to_string(d.kind));
            r["trial"] = std::string(to_string(u.kind));
            r["quotient_kind"] = c.quotient;
            r["seminorm"] = q.seminorm_p.value;
            r["seminorm_error"] = q.seminorm_p.error;
            r["weight"] = q.weight_integral.value;
            r["weight_error"] = q.weight_integral.error;
            r["quotient"] = q.quotient.value;
            r["quotient_error"] = q.quotient.error;
            r["method"] = std::string(to_string(q.quotient.method));
            return r;
        },
        {"domain", "trial", "quotient_kind", "seminorm", "seminorm_error", "weight", "weight_error", "quotient",
         "quotient_error", "method"});
}

inline Outcome cmd_verify_supersol(const RunConfig& c)
{
    const auto d = build_domain(c);
    SupersolOptions opt;
    opt.quad = quad_spec(c, opt.quad);
    opt.mc.samples = c.samples;
    opt.mc.seed = c.seed;
    opt.max_samples = std::max<std::uint64_t>(opt.max_samples, 16 * c.samples);
    const auto phis = supersol::bump_corpus(d, c.tests, c.seed);
    Outcome out;
    for (const auto& fp : param_grid(c)) {
        const BetaExponent be{resolve_beta(c.beta, fp), fp};
        const double lambda = c.lambda == "auto" ? constants::c_beta(be, quad_spec(c, {})).value
                                                 : detail::to_double(c.lambda, "lambda");
        const auto res = supersol::verify_supersolution(fp, d, be, lambda, phis, opt);
        for (std::size_t i = 0; i < res.size(); ++i) {
            const auto& pr = res[i];
            Row r = base_row(fp);
            r["beta"] = be.beta;
            r["lambda"] = lambda;
            r["index"] = i;
            r["center"] = point_text(phis[i].center);
            r["radius"] = phis[i].radius;
            r["amplitude"] = phis[i].amplitude;
            r["lhs"] = pr.lhs.value;
            r["lhs_error"] = pr.lhs.error;
            r["rhs"] = pr.rhs.value;
            r["rhs_error"] = pr.rhs.error;
            r["residual"] = pr.residual.value;
            r["residual_error"] = pr.residual.error;
            r["verdict"] = std::string(to_string(pr.verdict));
            if (pr.verdict == Verdict::violation) out.exit_code = std::max(out.exit_code, 2);
            if (pr.verdict == Verdict::inconclusive && out.exit_code == 0) out.exit_code = 3;
            out.rows.push_back(std::move(r));
        }
    }
    return out;
}

inline Outcome cmd_scan(const RunConfig& c)
{
    const auto spec = quad_spec(c, {});
    Outcome out = run_grid(
        param_grid(c),
        [&](const FracParams& fp) {
            const auto h = constants::hardy_constant(fp, spec);
            Row r = base_row(fp);
            r["h_sp"] = h.value.value;
            r["err"] = h.value.error;
            if (fp.supercritical()) {
                const auto cb = constants::c_beta({constants::hardy_beta(fp), fp}, spec);
                r["c_beta_id_residual"] = std::fabs(cb.value - h.value.value) / h.value.value;
            } else {
                r["c_beta_id_residual"] = nullptr;
            }
            return r;
        },
        {"h_sp", "err", "c_beta_id_residual"});
    return out;
}

} // namespace detail

[[nodiscard]] inline Outcome run(const RunConfig& c)
{
    require(c.dim >= 1 && c.dim <= 16, ErrorKind::invalid_config, "dim must lie in [1, 16]");
    using namespace detail;
    if (c.command == "constant") return cmd_constant(c);
    if (c.command == "cbeta") return cmd_cbeta(c);
    if (c.command == "kernel") return cmd_kernel(c);
    if (c.command == "kpn") return cmd_kpn(c);
    if (c.command == "limit-s1") return cmd_limit_s1(c);
    if (c.command == "limit-pinf") return cmd_limit_pinf(c);
    if (c.command == "bounds") return cmd_bounds(c);
    if (c.command == "rayleigh") return cmd_rayleigh(c);
    if (c.command == "verify-supersol") return cmd_verify_supersol(c);
    if (c.command == "scan") return cmd_scan(c);
    fail(ErrorKind::invalid_config, "unknown command '" + c.command + "'");
}

/// The resolved configuration embedded in every JSON record.
[[nodiscard]] inline nlohmann::ordered_json config_json(const RunConfig& c)
{
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["dim"] = c.dim;
    j["s"] = c.s;
    j["p"] = c.p;
    j["r"] = c.r;
    j["geometric"] = c.geometric;
    j["beta"] = c.beta;
    j["lambda"] = c.lambda;
    j["domain"] = c.domain;
    j["punctures"] = c.punctures;
    j["center"] = c.center;
    j["radius"] = c.radius;
    j["sides"] = c.sides;
    j["trial"] = c.trial;
    j["trial_center"] = c.trial_center;
    j["trial_radius"] = c.trial_radius;
    j["trial_beta"] = c.trial_beta;
    j["eps"] = c.eps;
    j["inner"] = c.inner;
    j["outer"] = c.outer;
    j["amplitude"] = c.amplitude;
    j["quotient"] = c.quotient;
    j["tests"] = c.tests;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["rel_tol"] = c.rel_tol;
    j["format"] = c.format;
    return j;
}

[[nodiscard]] inline std::string render(const RunConfig& c, const Outcome& o)
{
    if (c.format == "csv") return to_csv(o.rows);
    if (c.format == "table") return to_table(o.rows);
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = c.command;
    j["config"] = config_json(c);
    if (o.rows.size() == 1)
        for (const auto& [k, v] : o.rows.front().items()) j[k] = v;
    j["rows"] = o.rows;
    return j.dump(2) + "\n";
}

/// Registers the options on app; values land in c.
inline void add_options(CLI::App& app, RunConfig& c)
{
    app.option_defaults()->always_capture_default();
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.set_config("--config", "", "INI file with key = value lines; command-line flags take precedence");
    app.add_option("command", c.command, "Command to run")->required()->check(CLI::IsMember(commands()));
    app.add_option("--dim", c.dim, "Dimension N");
    app.add_option("--s", c.s, "s grid: value, list a,b or lo:hi:count");
    app.add_option("--p", c.p, "p grid: value, list a,b or lo:hi:count");
    app.add_option("--r", c.r, "r grid for the kernel command");
    app.add_flag("--geometric", c.geometric, "lo:hi:count grids are geometric (s toward 1, p toward infinity)");
    app.add_option("--beta", c.beta, "Exponent beta: number, hardy or mid");
    app.add_option("--lambda", c.lambda, "verify-supersol multiplier: number or auto (C(beta))");
    app.add_option("--domain", c.domain, "punctured, ball, box or half_space")
        ->check(CLI::IsMember({"punctured", "ball", "box", "half_space"}));
    app.add_option("--punctures", c.punctures, "Puncture points, e.g. 0,1 (N=1) or 0,0;1,0");
    app.add_option("--center", c.center, "Ball centre");
    app.add_option("--radius", c.radius, "Ball radius");
    app.add_option("--sides", c.sides, "Box side lengths, comma separated");
    app.add_option("--trial", c.trial, "Trial function: bump, cone or power")->check(CLI::IsMember({"bump", "cone", "power"}));
    app.add_option("--trial-center", c.trial_center, "Trial centre");
    app.add_option("--trial-radius", c.trial_radius, "Bump or cone radius");
    app.add_option("--trial-beta", c.trial_beta, "Power trial exponent: number, hardy or mid");
    app.add_option("--eps", c.eps, "Cone offset");
    app.add_option("--inner", c.inner, "Power trial inner radius");
    app.add_option("--outer", c.outer, "Power trial outer radius");
    app.add_option("--amplitude", c.amplitude, "Bump amplitude");
    app.add_option("--quotient", c.quotient, "hardy or poincare");
    app.add_option("--tests", c.tests, "Number of seeded test bumps");
    app.add_option("--seed", c.seed, "Random seed");
    app.add_option("--samples", c.samples, "Monte Carlo samples");
    app.add_option("--rel-tol", c.rel_tol, "Quadrature relative tolerance (0 keeps the default)");
    app.add_option("--format", c.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--output", c.output, "Output file (stdout when empty)");
}

/// Entry point behind the frac_hardy executable.
inline int main(int argc, char** argv)
{
    CLI::App app{"Sharp fractional Hardy constants, supersolution checks and eigenvalue bounds"};
    RunConfig c;
    add_options(app, c);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    Outcome o;
    try {
        o = run(c);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.kind());
    }
    const std::string text = render(c, o);
    if (c.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.output, std::ios::binary);
        f << text;
        if (!f) {
            std::cerr << "cannot write " << c.output << "\n";
            return 1;
        }
        if (c.format == "csv") {
            std::ofstream ini(c.output + ".ini", std::ios::binary);
            ini << app.config_to_str(true, false);
        }
    }
    return o.exit_code;
}

} // namespace frac_hardy::cli
