// miracli: tables, products and verification reports from the command line.
//
// exit 0 on success, 1 when a verification fails, 2 on bad input

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mira/io.hpp"
#include "mira/verify.hpp"

using namespace mira;
using io::json;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

[[noreturn]] void usage(const std::string& msg) { fail("UsageError", msg); }

// "2,1,1"; empty string or "-" is the empty partition
Partition parse_partition(const std::string& s) {
    if (s.empty() || s == "-") return Partition();
    std::vector<int> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        int x = 0;
        try {
            x = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != tok.size()) usage("bad partition '" + s + "'");
        parts.push_back(x);
    }
    return Partition(parts);
}

// "lam|mu", e.g. "2,1|1" or "|1,1"
Bipartition parse_bipartition(const std::string& s) {
    auto bar = s.find('|');
    if (bar == std::string::npos || s.find('|', bar + 1) != std::string::npos)
        usage("bipartition '" + s + "' must look like lam|mu");
    return {parse_partition(s.substr(0, bar)), parse_partition(s.substr(bar + 1))};
}

Side parse_side(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    usage("side must be left or right");
}

struct Globals {
    std::string out;
    std::string cache_dir;
    bool no_cache = false;
    bool verbose = false;

    std::optional<io::Cache> cache() const {
        if (no_cache) return std::nullopt;
        std::string dir = cache_dir;
        if (dir.empty())
            if (const char* env = std::getenv("MIRA_CACHE_DIR")) dir = env;
        if (dir.empty()) return std::nullopt;
        return io::Cache(dir);
    }
    template <class F>
    json cached(const std::string& module, const json& params, F&& compute) const {
        auto c = cache();
        if (!c) return compute();
        if (auto hit = c->load(module, params)) {
            if (verbose) std::cerr << "cache hit: " << c->path(module, params).string() << "\n";
            return *hit;
        }
        json v = compute();
        c->store(module, params, v);
        if (verbose) std::cerr << "cache store: " << c->path(module, params).string() << "\n";
        return v;
    }
    void emit(const std::string& text) const {
        if (out.empty())
            std::cout << text << std::flush;
        else
            io::write_file(out, text);
    }
    void emit(const json& j) const { emit(j.dump(2) + "\n"); }
};

std::string check_format(const std::string& f, std::initializer_list<const char*> allowed) {
    for (auto* a : allowed)
        if (f == a) return f;
    usage("unsupported format '" + f + "'");
}

void check_qs(const std::vector<int>& qs) {
    if (qs.empty()) usage("--qs must not be empty");
    for (int q : qs)
        if (q < 2 || q > 256) usage("field size " + std::to_string(q) + " out of range");
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Mirabolic Hall bimodule tables, oracles and reports"};
    app.set_config("--config", "", "key=value configuration file; command-line flags win");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out,-o", g.out, "write the artifact here instead of stdout");
    app.add_option("--cache-dir", g.cache_dir, "table cache directory (default: $MIRA_CACHE_DIR, else none)");
    app.add_flag("--no-cache", g.no_cache, "ignore the cache");
    app.add_flag("--verbose,-v", g.verbose, "cache notes on stderr");

    int status = kPass;

    // pi
    auto* pi = app.add_subcommand("pi", "Pi table (calibrated by default)");
    int pi_n = -1, pi_N = -1;
    std::string pi_fmt = "json";
    bool pi_raw = false;
    pi->add_option("--n", pi_n, "size")->required();
    pi->add_option("--N", pi_N, "rank (default n)");
    pi->add_option("--format", pi_fmt, "json|csv|latex");
    pi->add_flag("--raw", pi_raw, "uncalibrated entries (csv/latex)");
    pi->callback([&] {
        if (pi_n < 0) usage("--n must be >= 0");
        if (pi_N < 0) pi_N = pi_n;
        if (pi_N < pi_n) usage("--N must be >= n");
        if (pi_n > 6) fail("CostGuard", "pi tables limited to n <= 6");
        check_format(pi_fmt, {"json", "csv", "latex"});
        json j = g.cached("pi", {{"n", pi_n}, {"N", pi_N}}, [&] { return io::to_json(pi_table(pi_n, pi_N)); });
        if (pi_fmt == "json") return g.emit(j);
        PiTable t = io::pi_table_from(j);
        auto which = pi_raw ? io::PiWhich::Raw : io::PiWhich::Calibrated;
        if (pi_fmt == "csv") return g.emit(io::to_csv(io::pi_grid(t, which, false)));
        g.emit(io::to_latex(io::pi_grid(t, which, true)));
    });

    // mhl
    auto* mhl = app.add_subcommand("mhl", "mirabolic Hall-Littlewood polynomials in the Schur tensor basis");
    std::string mhl_bp;
    int mhl_n = -1, mhl_N = -1;
    mhl->add_option("--bp", mhl_bp, "one bipartition lam|mu");
    mhl->add_option("--n", mhl_n, "all bipartitions of n");
    mhl->add_option("--N", mhl_N, "rank (default: the size)");
    mhl->callback([&] {
        std::vector<Bipartition> bps;
        int size = 0;
        if (!mhl_bp.empty()) {
            bps.push_back(parse_bipartition(mhl_bp));
            size = bps[0].size();
        } else if (mhl_n >= 0) {
            size = mhl_n;
        } else {
            usage("give --bp or --n");
        }
        int N = mhl_N < 0 ? size : mhl_N;
        if (size > 5) fail("CostGuard", "mhl limited to size <= 5");
        if (bps.empty()) bps = bipartitions_of(mhl_n, N);
        json params = {{"N", N}, {"bps", json::array()}};
        for (auto& b : bps) params["bps"].push_back(io::to_json(b));
        g.emit(g.cached("mhl", params, [&] {
            json out = json::array();
            for (auto& b : bps) {
                auto [ts, pre] = mhl_poly(b, N);
                out.push_back({{"bipartition", io::to_json(b)}, {"prefactor", io::to_json(pre)}, {"tensor", io::to_json(ts)}});
            }
            return out;
        }));
    });

    // trace
    auto* tr = app.add_subcommand("trace", "trace tables and the flag-count oracle");
    int tr_n = -1, tr_q = 2;
    std::string tr_fmt = "json";
    bool tr_oracle = false;
    tr->add_option("--n", tr_n, "size")->required();
    tr->add_option("--q", tr_q, "field size");
    tr->add_option("--format", tr_fmt, "json|csv");
    tr->add_flag("--oracle", tr_oracle, "run the fiber oracle instead (exit 1 on failure)");
    tr->callback([&] {
        if (tr_n < 0) usage("--n must be >= 0");
        check_qs({tr_q});
        check_format(tr_fmt, {"json", "csv"});
        if (tr_n > 6) fail("CostGuard", "trace tables limited to n <= 6");
        PiTable t = io::pi_table_from(
            g.cached("pi", {{"n", tr_n}, {"N", tr_n}}, [&] { return io::to_json(pi_table(tr_n, tr_n)); }));
        if (tr_oracle) {
            if (tr_fmt != "json") usage("oracle reports are json only");
            json rep = g.cached("fiber", {{"n", tr_n}, {"q", tr_q}}, [&] {
                SqrtQ eps = calibrate_fiber(pi_table(1, 1), 2);
                return io::to_json(fiber_oracle_check(tr_n, tr_q, t, eps));
            });
            g.emit(rep);
            if (!rep.at("pass").get<bool>()) status = kFail;
            return;
        }
        if (tr_fmt == "csv") return g.emit(io::to_csv(io::trace_grid(t, tr_q)));
        g.emit(io::trace_json(t, tr_q));
    });

    // hall
    auto* hall = app.add_subcommand("hall", "classical Hall algebra");
    hall->require_subcommand(1);
    auto* hmul = hall->add_subcommand("mul", "u_a * u_b");
    std::string h_a, h_b;
    int h_N = -1;
    hmul->add_option("--a", h_a, "partition, e.g. 2,1")->required();
    hmul->add_option("--b", h_b, "partition")->required();
    hmul->add_option("--N", h_N, "rank")->required();
    hmul->callback([&] {
        Partition a = parse_partition(h_a), b = parse_partition(h_b);
        if (h_N < 1) usage("--N must be >= 1");
        if (a.size() + b.size() > 6) fail("CostGuard", "hall mul limited to total size <= 6");
        g.emit(io::to_json(hall_mul(HallElt::u(a, h_N), HallElt::u(b, h_N))));
    });

    // mirabolic
    auto* mir = app.add_subcommand("mirabolic", "mirabolic bimodule products and constants");
    mir->require_subcommand(1);
    std::string m_side = "left", m_gen, m_src, m_tgt;
    int m_N = -1, m_r = 1;
    auto* mact = mir->add_subcommand("act", "u_gen acting on u_src");
    mact->add_option("--side", m_side, "left|right");
    mact->add_option("--gen", m_gen, "partition")->required();
    mact->add_option("--src", m_src, "bipartition lam|mu")->required();
    mact->add_option("--N", m_N, "rank")->required();
    mact->callback([&] {
        Side s = parse_side(m_side);
        Partition gen = parse_partition(m_gen);
        Bipartition src = parse_bipartition(m_src);
        if (m_N < 1) usage("--N must be >= 1");
        if (gen.size() + src.size() > 6) fail("CostGuard", "act limited to total size <= 6");
        g.emit(io::to_json(act(s, HallElt::u(gen, m_N), MirElt::u(src, m_N))));
    });
    auto* mG = mir->add_subcommand("G", "one structure constant by brute force, as a polynomial in q");
    mG->add_option("--side", m_side, "left|right");
    mG->add_option("--gen", m_gen, "partition")->required();
    mG->add_option("--src", m_src, "bipartition")->required();
    mG->add_option("--tgt", m_tgt, "bipartition")->required();
    mG->callback([&] {
        Side s = parse_side(m_side);
        Partition gen = parse_partition(m_gen);
        Bipartition src = parse_bipartition(m_src), tgt = parse_bipartition(m_tgt);
        if (tgt.size() > 7) fail("CostGuard", "G limited to target size <= 7");
        QPoly p = G_poly(s, gen, src, tgt);
        g.emit(json{{"side", side_name(s)}, {"gen", io::to_json(gen)}, {"src", io::to_json(src)},
                    {"tgt", io::to_json(tgt)}, {"G", io::to_json(p)}, {"text", p.str()}});
    });
    auto* mcl = mir->add_subcommand("closed", "closed-form left constants for u_(1^r)");
    mcl->add_option("--r", m_r, "generator size")->required();
    mcl->add_option("--src", m_src, "bipartition")->required();
    mcl->add_option("--N", m_N, "rank")->required();
    mcl->callback([&] {
        Bipartition src = parse_bipartition(m_src);
        if (m_r < 1) usage("--r must be >= 1");
        if (m_N < 1) usage("--N must be >= 1");
        json out = json::array();
        for (auto& [t, p] : closed_form_G(m_r, src, m_N))
            out.push_back({{"tgt", io::to_json(t)}, {"G", io::to_json(p)}, {"text", p.str()}});
        g.emit(out);
    });

    // green
    auto* gr = app.add_subcommand("green", "Green bimodule checks");
    gr->require_subcommand(1);
    int g_n = 1, g_q = 2, g_d = 1;
    auto* gfree = gr->add_subcommand("freeness", "rank-one freeness (exit 1 if not free)");
    gfree->add_option("--n", g_n, "size")->required();
    gfree->add_option("--q", g_q, "prime field size");
    gfree->callback([&] {
        if (g_n < 0) usage("--n must be >= 0");
        auto rep = green_freeness_check(g_n, g_q, false);
        g.emit(json{{"n", g_n}, {"q", g_q}, {"rows", rep.rows}, {"cols", rep.cols}, {"rank", rep.rank}, {"free", rep.free()}});
        if (!rep.free()) status = kFail;
    });
    auto* girr = gr->add_subcommand("irreducibles", "monic irreducibles other than t");
    girr->add_option("--q", g_q, "prime field size");
    girr->add_option("--d", g_d, "degree")->required();
    girr->callback([&] {
        if (g_d < 1 || g_d > 4) usage("--d must be in 1..4");
        json out = json::array();
        for (auto& f : irreducibles(g_q, g_d)) out.push_back({{"coeffs", f}, {"text", fq_str(f)}});
        g.emit(out);
    });

    // iwahori
    auto* iw = app.add_subcommand("iwahori", "affine mirabolic Iwahori products");
    iw->require_subcommand(1);
    auto* iwm = iw->add_subcommand("mult", "T_x T_s for every x in the window and every s");
    int iw_N = 2, iw_W = 2;
    std::vector<int> iw_qs{2, 3};
    iwm->add_option("--N", iw_N, "rank");
    iwm->add_option("--window", iw_W, "window radius");
    iwm->add_option("--qs", iw_qs, "field sizes")->delimiter(',');
    iwm->callback([&] {
        check_qs(iw_qs);
        if (iw_N < 1 || iw_N > 3) usage("--N must be in 1..3");
        if (iw_W < 0 || iw_W > (iw_N == 2 ? 3 : 1)) fail("CostGuard", "window too wide for this N");
        auto fields = verify::iwahori_fields(iw_qs);
        json params = {{"N", iw_N}, {"window", iw_W}, {"fields", fields}};
        g.emit(g.cached("iwahori", params, [&] {
            IwahoriEngine e(fields);
            return json{{"N", iw_N}, {"window", iw_W}, {"fields", fields},
                        {"products", verify::iwahori_products(e, iw_N, iw_W, nullptr, nullptr)}};
        }));
    });

    // verify
    auto* ver = app.add_subcommand("verify", "oracle suites (exit 1 on any failure)");
    std::vector<std::string> v_suites{"all"};
    verify::Params vp;
    ver->add_option("--suite", v_suites, "all or suite names")->delimiter(',');
    ver->add_option("--qs", vp.qs, "field sizes")->delimiter(',');
    ver->add_option("--max-n", vp.max_n, "module size bound");
    ver->add_option("--max-src", vp.max_src, "structure-constant source size bound (default max-n - r)");
    ver->add_option("--seed", vp.seed, "seed for randomized searches");
    ver->callback([&] {
        check_qs(vp.qs);
        if (vp.max_n < 0 || vp.max_n > 4) usage("--max-n must be in 0..4");
        if (vp.max_src > 4) fail("CostGuard", "--max-src limited to 4");
        std::vector<std::string> names;
        for (auto& s : v_suites) {
            if (s == "all") {
                for (auto& [n, f] : verify::suites()) names.push_back(n);
            } else {
                verify::find_suite(s);
                names.push_back(s);
            }
        }
        json params = verify::params_json(vp);
        json report = {{"params", params}, {"version", io::kVersionTag}, {"suites", json::array()}};
        bool ok = true;
        for (auto& n : names) {
            json r = g.cached("verify-" + n, params, [&] { return verify::to_json(verify::find_suite(n)(vp)); });
            ok = ok && r.at("pass").get<bool>();
            report["suites"].push_back(r);
        }
        report["pass"] = ok;
        g.emit(report);
        if (!ok) status = kFail;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    return status;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
