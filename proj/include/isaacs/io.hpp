#ifndef ISAACS_IO_HPP
#define ISAACS_IO_HPP

// Deterministic CSV/JSON emission. Floating-point cells use 17 significant
// digits, rows end in LF, JSON keys keep insertion order, and files are
// written through a temporary so a reader never sees a partial table.

#include "isaacs/dirichlet_solver.hpp"
#include "isaacs/errors.hpp"
#include "isaacs/nonlocal_operator.hpp"
#include "isaacs/regularity.hpp"
#include "isaacs/thresholds.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace isaacs::io {

using json = nlohmann::ordered_json;

inline constexpr const char* version = "0.1.0";

inline std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    struct Cell {
        std::string text;
        Cell(double x) : text(format_double(x)) {}
        Cell(int x) : text(std::to_string(x)) {}
        Cell(long x) : text(std::to_string(x)) {}
        Cell(std::size_t x) : text(std::to_string(x)) {}
        Cell(bool b) : text(b ? "true" : "false") {}
        Cell(const char* s) : text(s) {}
        Cell(std::string s) : text(std::move(s)) {}
        Cell(const std::optional<double>& x) : text(x ? format_double(*x) : "") {}
    };

    void add_row(std::vector<Cell> row)
    {
        if (row.size() != header_.size()) throw IOError("CSV row width does not match the header");
        std::vector<std::string> r;
        r.reserve(row.size());
        for (auto& c : row) r.push_back(std::move(c.text));
        rows_.push_back(std::move(r));
    }

    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }

    std::string str() const
    {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IOError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IOError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw IOError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IOError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_json(const std::filesystem::path& path, const json& j) { write_file_atomic(path, dump(j)); }
inline void write_csv(const std::filesystem::path& path, const CsvTable& t) { write_file_atomic(path, t.str()); }

inline json number(double x)
{
    // JSON has no NaN or infinity
    return std::isfinite(x) ? json(x) : json(nullptr);
}

template <int N>
json to_json(const Point<N>& x)
{
    json a = json::array();
    for (int i = 0; i < N; ++i) a.push_back(x[i]);
    return a;
}

inline json to_json(const quad::IntegralResult& r)
{
    return json{{"value", number(r.value)},
                {"error_estimate", number(r.error_estimate)},
                {"subdivisions_used", r.subdivisions_used}};
}

inline json to_json(const RootBracket& b)
{
    return json{{"root", b.root},     {"lo", b.lo},
                {"hi", b.hi},         {"width", b.width()},
                {"f_lo", b.f_lo},     {"f_hi", b.f_hi},
                {"certified", b.certified()},
                {"evaluations", b.evaluations},
                {"max_error", b.max_error}};
}

inline json to_json(const ThresholdReport& r)
{
    json j;
    j["c"] = r.c;
    j["s"] = r.s ? json(*r.s) : json(nullptr);
    j["s0"] = to_json(r.s0);
    j["alpha_star"] = r.alpha_star ? to_json(*r.alpha_star) : json(nullptr);
    j["eps_threshold"] = r.eps_threshold ? to_json(*r.eps_threshold) : json(nullptr);
    j["quadrature_error"] = r.quadrature_error;
    return j;
}

inline CsvTable threshold_table(const std::vector<ThresholdReport>& reports)
{
    CsvTable t({"c", "s0", "s0_lo", "s0_hi", "s0_certified", "s", "alpha_star", "eps_threshold",
                "quadrature_error"});
    for (const auto& r : reports) {
        std::optional<double> a, e;
        if (r.alpha_star) a = r.alpha_star->root;
        if (r.eps_threshold) e = r.eps_threshold->root;
        t.add_row({r.c, r.s0.root, r.s0.lo, r.s0.hi, r.s0.certified(), r.s, a, e, r.quadrature_error});
    }
    return t;
}

template <int N>
json to_json(const OperatorEvaluation<N>& e)
{
    json j;
    j["value"] = number(e.value);
    j["inf_part"] = number(e.inf_part);
    j["sup_part"] = number(e.sup_part);
    j["minimizing_direction"] = to_json<N>(e.minimizing_direction.vec());
    j["maximizing_direction"] = to_json<N>(e.maximizing_direction.vec());
    j["argmin"] = e.argmin;
    j["argmax"] = e.argmax;
    j["directions"] = e.samples.size();
    j["truncation_error"] = e.truncation_error;
    j["quadrature_error"] = number(e.quadrature_error);
    return j;
}

template <int N>
CsvTable direction_table(const OperatorEvaluation<N>& e)
{
    std::vector<std::string> head;
    for (int i = 0; i < N; ++i) head.push_back("xi" + std::to_string(i));
    head.push_back("value");
    CsvTable t(head);
    for (const auto& d : e.samples) {
        std::vector<CsvTable::Cell> row;
        for (int i = 0; i < N; ++i) row.emplace_back(d.direction.vec()[i]);
        row.emplace_back(d.value);
        t.add_row(std::move(row));
    }
    return t;
}

template <int N>
json to_json(const SolveReport<N>& r)
{
    json j;
    j["method"] = r.method;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["residual"] = number(r.residual);
    j["lipschitz"] = r.lipschitz;
    j["dt"] = r.dt;
    j["h"] = r.solution.h();
    j["sup_norm"] = r.solution.sup_norm();
    json hist = json::array();
    for (double x : r.history) hist.push_back(number(x));
    j["residual_history"] = hist;
    return j;
}

/// Interior nodes with coordinates and value.
template <int N>
CsvTable solution_table(const GridFunction<N>& u)
{
    std::vector<std::string> head;
    for (int i = 0; i < N; ++i) head.push_back("x" + std::to_string(i));
    head.push_back("u");
    CsvTable t(head);
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.inside(k)) continue;
        const Point<N> x = u.grid().position(k);
        std::vector<CsvTable::Cell> row;
        for (int i = 0; i < N; ++i) row.emplace_back(x[i]);
        row.emplace_back(u[k]);
        t.add_row(std::move(row));
    }
    return t;
}

template <int N>
json to_json(const BarrierReport<N>& r)
{
    json j;
    j["s"] = r.s;
    j["alpha"] = r.alpha;
    j["mu"] = r.mu;
    j["h"] = r.h;
    j["nodes"] = r.nodes.size();
    j["all_negative"] = r.all_negative;
    j["boundary_case"] = r.boundary_case;
    j["m_hat"] = number(r.m_hat);
    j["worst"] = json{{"x", to_json<N>(r.worst.x)}, {"distance", r.worst.distance}, {"product", number(r.worst.product)}};
    return j;
}

template <int N>
CsvTable barrier_table(const BarrierReport<N>& r)
{
    std::vector<std::string> head;
    for (int i = 0; i < N; ++i) head.push_back("x" + std::to_string(i));
    head.push_back("distance");
    head.push_back("product");
    CsvTable t(head);
    for (const auto& n : r.nodes) {
        std::vector<CsvTable::Cell> row;
        for (int i = 0; i < N; ++i) row.emplace_back(n.x[i]);
        row.emplace_back(n.distance);
        row.emplace_back(n.product);
        t.add_row(std::move(row));
    }
    return t;
}

inline json to_json(const ExtremalLimit& e)
{
    json p = json::array();
    for (double x : e.products) p.push_back(number(x));
    return json{{"delta", e.delta},
                {"products", p},
                {"estimate", number(e.estimate)},
                {"extrapolated", number(e.extrapolated)},
                {"expected", e.expected}};
}

inline json to_json(const HolderFit& f)
{
    json j;
    j["alpha_defined"] = f.alpha_defined;
    j["alpha_hat"] = number(f.alpha_hat);
    j["seminorm_hat"] = number(f.seminorm_hat);
    j["fitted_scales"] = f.fitted_scales;
    j["residual"] = number(f.residual);
    json sc = json::array(), os = json::array();
    for (double x : f.scales) sc.push_back(x);
    for (double x : f.oscillation) os.push_back(number(x));
    j["scales"] = sc;
    j["oscillation"] = os;
    return j;
}

inline CsvTable holder_table(const HolderFit& f)
{
    CsvTable t({"scale", "oscillation"});
    for (std::size_t i = 0; i < f.scales.size(); ++i) t.add_row({f.scales[i], f.oscillation[i]});
    return t;
}

inline json to_json(const LiouvilleTable& tab)
{
    json j;
    j["s"] = tab.s;
    j["alpha_ref"] = tab.alpha_ref;
    j["monotone_decay"] = tab.monotone_decay;
    j["decay_exponent"] = number(tab.decay_exponent);
    json rows = json::array();
    for (const auto& r : tab.rows)
        rows.push_back(json{{"R", r.R},
                            {"h", r.h},
                            {"seminorm", number(r.seminorm)},
                            {"sup_norm", number(r.sup_norm)},
                            {"alpha_hat", r.alpha_hat ? number(*r.alpha_hat) : json(nullptr)},
                            {"fit_residual", number(r.residual)},
                            {"iterations", r.iterations},
                            {"converged", r.converged}});
    j["rows"] = rows;
    return j;
}

inline CsvTable liouville_table(const LiouvilleTable& tab)
{
    CsvTable t({"R", "seminorm", "sup_norm", "alpha_hat", "iterations", "converged"});
    for (const auto& r : tab.rows) t.add_row({r.R, r.seminorm, r.sup_norm, r.alpha_hat, r.iterations, r.converged});
    return t;
}

} // namespace isaacs::io

#endif
