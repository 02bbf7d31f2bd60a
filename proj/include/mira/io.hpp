#pragma once

// JSON / CSV / LaTeX emitters for the computed objects, plus an on-disk
// cache for finished tables.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mira/hallalg.hpp"
#include "mira/iwahori.hpp"
#include "mira/mirahall.hpp"
#include "mira/sheaftrace.hpp"
#include "mira/symfun.hpp"

namespace mira::io {

using json = nlohmann::json;

// bumped whenever any table-producing code changes its output
inline constexpr const char* kVersionTag = "mira-1.0.0";

// ---- scalars and polynomials ----------------------------------------------

// small integers as numbers, anything wider as a decimal string
inline json int_json(const Int& c) {
    if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max())
        return json(static_cast<std::int64_t>(c));
    return json(c.str());
}
inline Int int_from(const json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    fail("ParseError", "not an integer: " + j.dump());
}

inline json to_json(const LaurentPoly& p) {
    json j = json::object();
    for (auto& [e, c] : p.terms()) j[std::to_string(e)] = int_json(c);
    return j;
}
inline int exp_from(const std::string& key) {
    size_t pos = 0;
    int e = 0;
    try {
        e = std::stoi(key, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != key.size()) fail("ParseError", "bad exponent key '" + key + "'");
    return e;
}
inline LaurentPoly laurent_from(const json& j) {
    if (!j.is_object()) fail("ParseError", "polynomial must be an object");
    LaurentPoly p;
    for (auto& [k, c] : j.items()) p.add_term(exp_from(k), int_from(c));
    return p;
}
inline json to_json(const QPoly& p) {
    json j = json::object();
    for (auto& [e, c] : p.terms()) j[std::to_string(e)] = int_json(c);
    return j;
}
inline QPoly qpoly_from(const json& j) {
    if (!j.is_object()) fail("ParseError", "polynomial must be an object");
    QPoly p;
    for (auto& [k, c] : j.items()) p.add_term(exp_from(k), int_from(c));
    return p;
}

// ---- combinatorial keys ---------------------------------------------------

inline json to_json(const Partition& p) { return json(p.parts()); }
inline Partition partition_from(const json& j) {
    if (!j.is_array()) fail("ParseError", "partition must be an array");
    std::vector<int> v;
    for (auto& x : j) {
        if (!x.is_number_integer()) fail("ParseError", "partition part " + x.dump());
        v.push_back(x.get<int>());
    }
    return Partition(v);
}
inline json to_json(const Bipartition& b) { return json::array({to_json(b.lam), to_json(b.mu)}); }
inline Bipartition bipartition_from(const json& j) {
    if (!j.is_array() || j.size() != 2) fail("ParseError", "bipartition must be a pair of arrays");
    return {partition_from(j[0]), partition_from(j[1])};
}

inline Basis basis_from(const std::string& s) {
    for (Basis b : {Basis::Monomial, Basis::Schur, Basis::HallLittlewood})
        if (s == basis_name(b)) return b;
    fail("ParseError", "unknown basis '" + s + "'");
}

// ---- algebra elements -----------------------------------------------------

inline json to_json(const SymPoly& f) {
    json terms = json::array();
    for (auto& [p, c] : f.coeffs) terms.push_back({to_json(p), to_json(c)});
    return {{"basis", basis_name(f.basis)}, {"rank", f.rank}, {"terms", terms}};
}
inline SymPoly sympoly_from(const json& j) {
    SymPoly f;
    f.basis = basis_from(j.at("basis").get<std::string>());
    f.rank = j.at("rank").get<int>();
    for (auto& t : j.at("terms")) f.add(partition_from(t.at(0)), laurent_from(t.at(1)));
    return f;
}
inline json to_json(const TensorSym& f) {
    json terms = json::array();
    for (auto& [k, c] : f.coeffs) terms.push_back({to_json(k.first), to_json(k.second), to_json(c)});
    return {{"basis", basis_name(f.basis)}, {"rank", f.rank}, {"terms", terms}};
}
inline TensorSym tensorsym_from(const json& j) {
    TensorSym f;
    f.basis = basis_from(j.at("basis").get<std::string>());
    f.rank = j.at("rank").get<int>();
    for (auto& t : j.at("terms")) f.add(partition_from(t.at(0)), partition_from(t.at(1)), laurent_from(t.at(2)));
    return f;
}

inline json to_json(const HallElt& h) {
    json terms = json::array();
    for (auto& [p, c] : h.coeffs) terms.push_back({to_json(p), to_json(c)});
    return {{"rank", h.rank}, {"terms", terms}};
}
inline HallElt hall_from(const json& j) {
    HallElt h{j.at("rank").get<int>(), {}};
    for (auto& t : j.at("terms")) {
        LaurentPoly c = laurent_from(t.at(1));
        if (!c.is_zero()) h.coeffs[partition_from(t.at(0))] = c;
    }
    return h;
}
inline json to_json(const MirElt& m) {
    json terms = json::array();
    for (auto& [b, c] : m.coeffs) terms.push_back({to_json(b), to_json(c)});
    return {{"rank", m.rank}, {"terms", terms}};
}
inline MirElt mir_from(const json& j) {
    MirElt m{j.at("rank").get<int>(), {}};
    for (auto& t : j.at("terms")) {
        LaurentPoly c = laurent_from(t.at(1));
        if (!c.is_zero()) m.coeffs[bipartition_from(t.at(0))] = c;
    }
    return m;
}

// ---- Pi tables ------------------------------------------------------------

inline json to_json(const PiTable& t) {
    json order = json::array(), raw = json::array(), cal = json::array(), units = json::array();
    for (auto& b : t.order) order.push_back(to_json(b));
    // column-major in table order so the files read like the matrices
    for (auto& col : t.order)
        for (auto& row : t.order) {
            auto it = t.raw.find({row, col});
            if (it == t.raw.end()) continue;
            raw.push_back({to_json(row), to_json(col), to_json(it->second)});
            cal.push_back({to_json(row), to_json(col), to_json(t.calibrated.at({row, col}))});
        }
    for (auto& b : t.order) units.push_back({to_json(b), to_json(t.diag_units.at(b))});
    return {{"n", t.n}, {"N", t.N}, {"order", order}, {"raw", raw}, {"calibrated", cal}, {"diag_units", units}};
}
inline PiTable pi_table_from(const json& j) {
    PiTable t;
    t.n = j.at("n").get<int>();
    t.N = j.at("N").get<int>();
    for (auto& b : j.at("order")) t.order.push_back(bipartition_from(b));
    for (auto& e : j.at("raw")) t.raw[{bipartition_from(e.at(0)), bipartition_from(e.at(1))}] = laurent_from(e.at(2));
    for (auto& e : j.at("calibrated"))
        t.calibrated[{bipartition_from(e.at(0)), bipartition_from(e.at(1))}] = laurent_from(e.at(2));
    for (auto& e : j.at("diag_units")) t.diag_units[bipartition_from(e.at(0))] = laurent_from(e.at(1));
    return t;
}

// ---- affine elements ------------------------------------------------------

inline json to_json(const RBAffElt& x) {
    return {{"w", x.w.window}, {"beta", {{"lo", x.beta.lo}, {"extra", x.beta.extra}}}};
}
inline RBAffElt rbaff_from(const json& j) {
    auto w = j.at("w").get<std::vector<int>>();
    BetaSet b{j.at("beta").at("lo").get<long>(), j.at("beta").at("extra").get<std::set<long>>()};
    return validate(AffinePerm(int(w.size()), w), b);
}
inline json to_json(const RBVec& v) {
    json out = json::array();
    for (auto& [z, c] : v) out.push_back({{"elt", to_json(z)}, {"coeff", to_json(c)}});
    return out;
}
inline RBVec rbvec_from(const json& j) {
    RBVec v;
    for (auto& e : j) rb_add(v, rbaff_from(e.at("elt")), qpoly_from(e.at("coeff")));
    return v;
}

// ---- text renderings ------------------------------------------------------

// a+b√q with integer a, b
inline std::string sqrtq_str(const Int& a, const Int& b) {
    if (b == 0) return a.str();
    std::string bs = (b == 1) ? "" : (b == -1) ? "-" : b.str();
    std::string tail = bs + "√q";
    if (a == 0) return tail;
    return a.str() + (b > 0 ? "+" : "") + tail;
}
inline std::string render(const TraceCell& c) {
    if (c.q_value) {
        auto [a, b] = c.eval();
        return sqrtq_str(a, b);
    }
    if (c.b.is_zero()) return c.a.str();
    return "(" + c.a.str() + ")+(" + c.b.str() + ")√q";
}

// highest exponent first, negative exponents braced
inline std::string latex(const LaurentPoly& p, const std::string& var = "v") {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        Int c = it->second;
        int e = it->first;
        if (c < 0) {
            os << "-";
            c = -c;
        } else if (!first) {
            os << "+";
        }
        first = false;
        if (e == 0) {
            os << c;
            continue;
        }
        if (c != 1) os << c;
        os << var;
        if (e != 1) os << "^{" << e << "}";
    }
    return os.str();
}
inline std::string latex(const Partition& p) {
    if (p.empty()) return "\\emptyset";
    std::string s = "(";
    for (int i = 0; i < p.length(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}
inline std::string latex(const Bipartition& b) { return "(" + latex(b.lam) + "," + latex(b.mu) + ")"; }

// A labelled matrix of already-rendered cells.
struct Grid {
    std::vector<std::string> rows, cols;
    std::vector<std::vector<std::string>> cells;  // [row][col]
};

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char ch : s) r += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
    return r + "\"";
}
inline std::string to_csv(const Grid& g) {
    std::ostringstream os;
    os << "row";
    for (auto& c : g.cols) os << "," << csv_field(c);
    os << "\n";
    for (size_t i = 0; i < g.rows.size(); ++i) {
        os << csv_field(g.rows[i]);
        for (auto& x : g.cells[i]) os << "," << csv_field(x);
        os << "\n";
    }
    return os.str();
}
inline std::string to_latex(const Grid& g, const std::string& caption = "") {
    std::ostringstream os;
    os << "\\documentclass{article}\n\\pagestyle{empty}\n\\begin{document}\n";
    if (!caption.empty()) os << caption << "\n\n";
    os << "\\[\n\\begin{array}{c|" << std::string(g.cols.size(), 'c') << "}\n";
    for (auto& c : g.cols) os << " & " << c;
    os << " \\\\\n\\hline\n";
    for (size_t i = 0; i < g.rows.size(); ++i) {
        os << g.rows[i];
        for (auto& x : g.cells[i]) os << " & " << x;
        os << " \\\\\n";
    }
    os << "\\end{array}\n\\]\n\\end{document}\n";
    return os.str();
}

enum class PiWhich { Calibrated, Raw };

inline Grid pi_grid(const PiTable& t, PiWhich which, bool tex) {
    auto& m = which == PiWhich::Calibrated ? t.calibrated : t.raw;
    Grid g;
    for (auto& b : t.order) {
        g.rows.push_back(tex ? latex(b) : b.str());
        g.cols.push_back(tex ? latex(b) : b.str());
    }
    for (auto& row : t.order) {
        std::vector<std::string> line;
        for (auto& col : t.order) {
            auto it = m.find({row, col});
            LaurentPoly p = it == m.end() ? LaurentPoly() : it->second;
            line.push_back(tex ? latex(p) : p.str());
        }
        g.cells.push_back(line);
    }
    return g;
}

// trace of the column sheaf at points of the row stratum, evaluated at q
inline Grid trace_grid(const PiTable& t, int q) {
    Grid g;
    for (auto& b : t.order) {
        g.rows.push_back(b.str());
        g.cols.push_back(b.str());
    }
    for (auto& row : t.order) {
        std::vector<std::string> line;
        for (auto& col : t.order) line.push_back(render(trace_value(col, row, t, q)));
        g.cells.push_back(line);
    }
    return g;
}
inline json trace_json(const PiTable& t, int q) {
    json cells = json::array();
    for (auto& col : t.order)
        for (auto& row : t.order) {
            TraceCell c = trace_value(col, row, t, q);
            auto [a, b] = c.eval();
            cells.push_back({{"col", to_json(col)}, {"row", to_json(row)}, {"a", to_json(c.a)}, {"b", to_json(c.b)},
                             {"value", sqrtq_str(a, b)}});
        }
    return {{"n", t.n}, {"q", q}, {"cells", cells}};
}

inline json to_json(const SqrtQ& s) { return {{"x", s.x.str()}, {"y", s.y.str()}}; }
inline json to_json(const FiberReport& r) {
    json cells = json::array();
    for (auto& c : r.cells)
        cells.push_back({{"stratum", to_json(c.stratum)}, {"m", c.m}, {"flags", int_json(c.flags)},
                         {"predicted", to_json(c.predicted)}, {"pass", c.ok}});
    return {{"n", r.n}, {"q", r.q}, {"epsilon", to_json(r.epsilon)}, {"pass", r.pass()}, {"cells", cells}};
}

// ---- files and cache ------------------------------------------------------

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::filesystem::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) fail("IOFailure", "cannot write " + p.string());
        out << text;
        if (!out) fail("IOFailure", "short write to " + p.string());
    }
    std::filesystem::rename(tmp, p, ec);
    if (ec) fail("IOFailure", "rename to " + p.string() + ": " + ec.message());
}
inline std::optional<std::string> read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Entries live at dir/<module>-<hash>.json and record their own key, so a
// hash collision or a different version tag reads as a miss.
class Cache {
public:
    explicit Cache(std::filesystem::path dir, std::string version = kVersionTag)
        : dir_(std::move(dir)), version_(std::move(version)) {}

    std::filesystem::path path(const std::string& module, const json& params) const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(key(module, params).dump()));
        return dir_ / (module + "-" + buf + ".json");
    }
    std::optional<json> load(const std::string& module, const json& params) const {
        auto text = read_file(path(module, params));
        if (!text) return std::nullopt;
        json j = json::parse(*text, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("payload")) return std::nullopt;
        if (j.value("key", json()) != key(module, params)) return std::nullopt;
        return j["payload"];
    }
    void store(const std::string& module, const json& params, const json& payload) const {
        json j = {{"key", key(module, params)}, {"payload", payload}};
        write_file(path(module, params), j.dump());
    }
    template <class F>
    json get_or_compute(const std::string& module, const json& params, F&& compute) const {
        if (auto hit = load(module, params)) return *hit;
        json v = compute();
        store(module, params, v);
        return v;
    }
    const std::string& version() const { return version_; }

private:
    json key(const std::string& module, const json& params) const {
        return {{"module", module}, {"params", params}, {"version", version_}};
    }
    std::filesystem::path dir_;
    std::string version_;
};

}  // namespace mira::io
