#pragma once

// The oracle-backed verification suites shared by `miracli verify` and the
// acceptance binary. Each suite returns a deterministic JSON report; no
// timings or addresses go into it.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "mira/io.hpp"

namespace mira::verify {

using io::json;
using io::to_json;

struct Params {
    std::vector<int> qs{2, 3};
    int max_n = 4;        // bound on the module size n (targets, tables, strata)
    int max_src = -1;     // structure constants: |src| bound; -1 means |src| + r <= max_n
    unsigned seed = 12345;
};

inline json params_json(const Params& p) {
    return {{"qs", p.qs}, {"max_n", p.max_n}, {"max_src", p.max_src}, {"seed", p.seed}};
}

struct Result {
    std::string name;
    bool pass = true;
    json detail = json::object();
};

inline json to_json(const Result& r) { return {{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}}; }

// records at most a handful of failures so reports stay readable
struct Failures {
    json list = json::array();
    int count = 0;
    void add(json j) {
        if (count++ < 20) list.push_back(std::move(j));
    }
};

inline bool has_q(const Params& p, int q) { return std::find(p.qs.begin(), p.qs.end(), q) != p.qs.end(); }

// ---- 1: orbit census -------------------------------------------------------

inline Result census(const Params& p) {
    Result r{"census"};
    json rows = json::array();
    for (int q : p.qs) {
        if (q > 3) continue;
        for (int n = 0; n <= std::min(p.max_n, 4); ++n) {
            size_t orbits = enumerate_orbit_reps(n, q, 4, 3, p.seed).size();
            size_t bips = bipartitions_of(n).size();
            rows.push_back({{"n", n}, {"q", q}, {"orbits", orbits}, {"bipartitions", bips}});
            r.pass = r.pass && orbits == bips;
        }
    }
    r.detail["cases"] = rows;
    return r;
}

// ---- 2: closed-form structure constants -----------------------------------

inline Result structure(const Params& p) {
    Result r{"structure"};
    Failures bad;
    int pairs = 0;
    std::set<std::pair<Bipartition, Bipartition>> distinct;
    for (int N = 1; N <= 4; ++N)
        for (int rr = 1; rr <= 2; ++rr) {
            int top = p.max_src >= 0 ? p.max_src : p.max_n - rr;
            for (int n = 0; n <= top; ++n)
                for (auto& src : bipartitions_of(n, N)) {
                    auto cf = closed_form_G(rr, src, N);
                    for (auto& tgt : bipartitions_of(n + rr, N)) {
                        ++pairs;
                        QPoly bf = G_poly(Side::Left, ones(rr), src, tgt);
                        QPoly c = cf.count(tgt) ? cf.at(tgt) : QPoly();
                        if (bf == c) continue;
                        distinct.insert({src, tgt});
                        bad.add({{"N", N}, {"r", rr}, {"src", to_json(src)}, {"tgt", to_json(tgt)},
                                     {"brute", io::to_json(bf)}, {"closed", io::to_json(c)}});
                    }
                }
        }
    // the two golden constants
    Bipartition s{Partition(), Partition({1})};
    QPoly g1 = G_poly(Side::Left, Partition({1}), s, {Partition(), Partition({1, 1})});
    QPoly g2 = G_poly(Side::Left, Partition({1}), s, {Partition({1}), Partition({1})});
    bool golden = g1 == QPoly::q() + QPoly(1) && g2 == QPoly(1);
    auto cf = closed_form_G(1, s, 2);
    golden = golden && cf[{Partition(), Partition({1, 1})}] == g1 && cf[{Partition({1}), Partition({1})}] == g2;
    r.pass = bad.count == 0 && golden;
    r.detail = {{"pairs", pairs}, {"mismatches", bad.count}, {"distinct", distinct.size()}, {"examples", bad.list}, {"golden", golden}};
    return r;
}

// ---- 3: Hall algebra sanity -----------------------------------------------

inline Result hall(const Params&) {
    Result r{"hall"};
    LaurentPoly q = LaurentPoly::v(2);
    bool square = true;
    for (int N = 1; N <= 4; ++N) {
        auto u1 = HallElt::u(Partition({1}), N);
        HallElt want{N, {}};
        want.add(Partition({2}), 1);
        if (N >= 2) want.add(Partition({1, 1}), q + LaurentPoly(1));
        square = square && hall_mul(u1, u1).coeffs == want.coeffs;
    }
    // every ordered product of generators u_(1^k), total size <= 5, N = 4
    const int N = 4;
    Failures bad;
    int products = 0;
    std::vector<int> seq;
    std::function<void(int)> rec = [&](int left) {
        if (!seq.empty()) {
            ++products;
            HallElt x = HallElt::u(Partition(), N);
            SymPoly y = psi(x);
            for (int k : seq) {
                auto g = HallElt::u(ones(k), N);
                x = hall_mul(x, g);
                y = mul_monomial(y, psi(g));
            }
            if (psi(x).coeffs != y.coeffs) bad.add(seq);
        }
        for (int k = 1; k <= std::min(left, N); ++k) {
            seq.push_back(k);
            rec(left - k);
            seq.pop_back();
        }
    };
    rec(5);
    r.pass = square && bad.count == 0;
    r.detail = {{"u1_squared", square}, {"psi_products", products}, {"psi_failures", bad.list}};
    return r;
}

// ---- 4: golden n = 2 table -------------------------------------------------

inline Result pi_golden(const Params&) {
    Result r{"pi-golden"};
    auto v = [](int e) { return LaurentPoly::v(e); };
    auto B = [](std::vector<int> l, std::vector<int> m) { return Bipartition{Partition(l), Partition(m)}; };
    std::vector<Bipartition> order{B({2}, {}), B({1}, {1}), B({1, 1}, {}), B({}, {2}), B({}, {1, 1})};
    std::vector<std::vector<LaurentPoly>> cols{{1, v(-1), v(-2), v(-2), v(-4)},
                                               {1, v(-1), v(-1), v(-1) + v(-3)},
                                               {1, v(-2)},
                                               {1, v(-2)},
                                               {1}};
    PiTable t = pi_table(2, 2);
    r.pass = t.order == order;
    json got = json::array();
    for (size_t c = 0; c < order.size(); ++c) {
        std::vector<LaurentPoly> col;
        json jc = json::array();
        for (auto& row : order) {
            LaurentPoly x = pi_entry(t, row, order[c]);
            if (x.is_zero()) continue;
            col.push_back(x);
            jc.push_back(x.str());
        }
        got.push_back({{"col", to_json(order[c])}, {"entries", jc}});
        r.pass = r.pass && col == cols[c];
    }
    r.detail["columns"] = got;
    return r;
}

// ---- 5: Pi properties -------------------------------------------------------

inline Result pi_props(const Params& p) {
    Result r{"pi-properties"};
    Failures bad;
    json sizes = json::array();
    for (int n = 0; n <= std::min(p.max_n, 4); ++n) {
        PiTable t = pi_table(n, n);
        for (auto& x : t.order)
            if (t.raw.at({x, x}) != LaurentPoly(1)) bad.add({{"diag", to_json(x)}});
        for (auto& [rc, val] : t.raw) {
            auto& [row, col] = rc;
            if (!ah_leq(row, col)) bad.add({{"order", {to_json(row), to_json(col)}}});
            if (row != col && val.max_exp() >= 0) bad.add({{"exponent", {to_json(row), to_json(col)}}});
            if (!t.calibrated.at(rc).nonneg_coeffs()) bad.add({{"sign", {to_json(row), to_json(col)}}});
        }
        bool stable = true;
        if (n <= 3) {
            PiTable u = pi_table(n, n + 1);
            stable = u.calibrated == t.calibrated && u.order == t.order;
            if (!stable) bad.add({{"unstable", n}});
        }
        sizes.push_back({{"n", n}, {"entries", t.raw.size()}, {"stable_checked", n <= 3}});
    }
    r.pass = bad.count == 0;
    r.detail = {{"tables", sizes}, {"failures", bad.list}};
    return r;
}

// ---- 6: classical reduction ------------------------------------------------

inline Result classical(const Params& p) {
    Result r{"classical"};
    Failures bad;
    int cells = 0;
    for (int n = 0; n <= std::min(p.max_n, 4); ++n) {
        PiTable t = pi_table(n, n);
        for (auto& mu : partitions_of(n))
            for (auto& mup : partitions_of(n)) {
                LaurentPoly k = kostka_foulkes(mu, mup, n);
                cells += 2;
                if (pi_entry(t, {Partition(), mup}, {Partition(), mu}) != k)
                    bad.add({{"side", "mu"}, {"mu", to_json(mu)}, {"mu'", to_json(mup)}});
                if (pi_entry(t, {mup, Partition()}, {mu, Partition()}) != k)
                    bad.add({{"side", "lambda"}, {"lambda", to_json(mu)}, {"lambda'", to_json(mup)}});
            }
    }
    r.pass = bad.count == 0;
    r.detail = {{"cells", cells}, {"failures", bad.list}};
    return r;
}

// ---- 7: trace / fiber oracle ------------------------------------------------

inline Result fiber(const Params& p) {
    Result r{"fiber"};
    SqrtQ eps = calibrate_fiber(pi_table(1, 1), 2);
    json reps = json::array();
    for (int q : p.qs)
        for (int n = 1; n <= std::min(p.max_n, 4); ++n) {
            if (!((q == 2 && n <= 4) || (q == 3 && n <= 3))) continue;
            auto rep = fiber_oracle_check(n, q, pi_table(n, n), eps);
            int ok = int(std::count_if(rep.cells.begin(), rep.cells.end(), [](auto& c) { return c.ok; }));
            reps.push_back({{"n", n}, {"q", q}, {"cells", rep.cells.size()}, {"ok", ok}, {"pass", rep.pass()}});
            r.pass = r.pass && rep.pass();
        }
    // the named cell
    Bipartition col{Partition({1}), Partition({1})}, row{Partition(), Partition({1, 1})};
    bool cell = true;
    if (has_q(p, 2) && p.max_n >= 2) {
        auto tr = trace_value(col, row, pi_table(2, 2), 2);
        long long flags = count_admissible_flags(2, 1, normal_form_pair(row, 2));
        cell = tr.a == QPoly::q() + QPoly(1) && tr.b.is_zero() && tr.eval().first == 3 && flags == 3;
        r.detail["named_cell"] = {{"trace", io::render(tr)}, {"flags", flags}};
    }
    r.pass = r.pass && cell;
    r.detail["epsilon"] = io::to_json(eps);
    r.detail["reports"] = reps;
    return r;
}

// ---- 8: duality -----------------------------------------------------------

inline Result duality(const Params& p) {
    Result r{"duality"};
    const int N = 3;
    Failures bad;
    int sources = 0;
    for (int n = 0; n <= std::min(p.max_n, 3); ++n)
        for (auto& src : bipartitions_of(n, N))
            for (int rr : {1, N - 1}) {
                ++sources;
                for (auto& t : rho_mismatches(src, rr, N)) bad.add({{"src", to_json(src)}, {"r", rr}, {"tgt", to_json(t)}});
            }
    r.pass = bad.count == 0;
    r.detail = {{"cases", sources}, {"failures", bad.list}};
    return r;
}

// ---- 9: Green bimodule ------------------------------------------------------

inline Result green(const Params& p) {
    Result r{"green"};
    Failures bad;
    json free = json::array();
    for (int q : p.qs) {
        if (q > 3) continue;
        std::vector<GreenAlgLabel> alg;
        std::vector<GreenLabel> mods;
        for (int k = 0; k <= 1; ++k) {
            for (auto& a : green_alg_labels(k, q)) alg.push_back(a);
            for (auto& m : green_labels(k, q)) mods.push_back(m);
        }
        for (auto& a : alg)
            for (auto& b : alg)
                for (auto& m : mods) {
                    GreenVec x{{m, Int(1)}};
                    bool ok = green_mul(Side::Right, b, green_mul(Side::Left, a, x)) ==
                                  green_mul(Side::Left, a, green_mul(Side::Right, b, x)) &&
                              green_mul(Side::Left, green_alg_mul(a, b), x) ==
                                  green_mul(Side::Left, a, green_mul(Side::Left, b, x)) &&
                              green_mul(Side::Right, green_alg_mul(a, b), x) ==
                                  green_mul(Side::Right, b, green_mul(Side::Right, a, x));
                    if (!ok) bad.add({{"q", q}, {"a", a.str()}, {"b", b.str()}, {"m", m.str()}});
                }
        for (int n = 0; n <= std::min(p.max_n, 2); ++n) {
            auto rep = green_freeness_check(n, q, false);
            free.push_back({{"n", n}, {"q", q}, {"rows", rep.rows}, {"rank", rep.rank}, {"free", rep.free()}});
            if (!rep.free()) bad.add({{"not_free", n}, {"q", q}});
        }
        // degree-one factor against the mirabolic constants
        FqPoly f{q - 1, 1};
        for (int n = 0; n <= std::min(p.max_n, 2); ++n)
            for (auto& src : bipartitions_of(n))
                for (int k = 1; k <= 2; ++k)
                    for (auto& nu : partitions_of(k))
                        for (Side side : {Side::Left, Side::Right}) {
                            GreenLabel sl{q, {}};
                            sl.set(f, src);
                            auto res = green_mul(side, GreenAlgLabel{q, {{f, nu}}}, GreenVec{{sl, Int(1)}});
                            for (auto& tgt : bipartitions_of(n + k)) {
                                GreenLabel tl{q, {}};
                                tl.set(f, tgt);
                                Int got = res.count(tl) ? res.at(tl) : Int(0);
                                if (got != G_poly(side, nu, src, tgt).eval(q))
                                    bad.add({{"q", q}, {"src", to_json(src)}, {"nu", to_json(nu)}, {"tgt", to_json(tgt)}});
                            }
                        }
    }
    r.pass = bad.count == 0;
    r.detail = {{"freeness", free}, {"failures", bad.list}};
    return r;
}

// ---- 10: Iwahori templates -------------------------------------------------

inline json iwahori_products(IwahoriEngine& e, int N, int W, Failures* bad, std::map<int, int>* cases) {
    json rows = json::array();
    QPoly q = QPoly::q();
    for (auto& x : enumerate_rb(N, W))
        for (int i = 1; i <= N; ++i) {
            RBVec prod = e.ts_action(x, i);
            json row = {{"x", io::to_json(x)}, {"i", i}, {"product", io::to_json(prod)}};
            PatternMatch pm;
            bool matched = true;
            try {
                pm = pattern_check(x, i, prod);
                row["case"] = pm.case_id;
                row["lift"] = pm.lift;
                if (cases) ++(*cases)[pm.case_id];
            } catch (const Error& err) {
                matched = false;
                row["case"] = nullptr;
                if (bad) bad->add({{"x", x.str()}, {"i", i}, {"error", err.what()}});
            }
            if (bad) {
                for (auto& [z, c] : prod)
                    if (c.degree() > 1) bad->add({{"x", x.str()}, {"i", i}, {"degree", c.degree()}});
                if (matched && h_shape(x, prod) != expected_h_shape(x, i, pm))
                    bad->add({{"x", x.str()}, {"i", i}, {"h_shape", false}});
                RBVec two = e.ts_action(prod, i), want;
                for (auto& [z, c] : prod) rb_add(want, z, c * (q - QPoly(1)));
                rb_add(want, x, q);
                if (two != want) bad->add({{"x", x.str()}, {"i", i}, {"quadratic", false}});
                int top = -1000000;
                for (auto& [z, c] : prod) top = std::max(top, z.length());
                std::vector<RBAffElt> tops;
                for (auto& [z, c] : prod)
                    if (z.length() == top) tops.push_back(z);
                bool bruhat = tops.size() == 1 && bruhat_leq(x, tops[0]);
                for (auto& [z, c] : prod) bruhat = bruhat && tops.size() == 1 && bruhat_leq(z, tops[0]);
                if (!bruhat) bad->add({{"x", x.str()}, {"i", i}, {"bruhat", false}});
            }
            rows.push_back(row);
        }
    return rows;
}

// field sizes for the engine: the requested ones plus a third point, so the
// degree bound is checked rather than fitted
inline std::vector<int> iwahori_fields(const std::vector<int>& qs) {
    std::vector<int> f = qs;
    for (int extra : {4, 5, 7})
        if (f.size() < 3 && std::find(f.begin(), f.end(), extra) == f.end()) f.push_back(extra);
    std::sort(f.begin(), f.end());
    return f;
}

inline Result iwahori(const Params& p) {
    Result r{"iwahori"};
    IwahoriEngine e(iwahori_fields(p.qs));
    Failures bad;
    std::map<int, int> c2, c3;
    int n2 = int(iwahori_products(e, 2, 2, &bad, &c2).size());
    int n3 = int(iwahori_products(e, 3, 1, &bad, &c3).size());
    r.pass = bad.count == 0 && c2.size() == 5;
    json hist = json::object();
    for (auto& [k, v] : c2) hist[std::to_string(k)] = v;
    r.detail = {{"products_N2", n2}, {"products_N3", n3}, {"cases_N2", hist}, {"failures", bad.list}};
    return r;
}

// ---- registry ---------------------------------------------------------------

using SuiteFn = Result (*)(const Params&);
inline const std::vector<std::pair<std::string, SuiteFn>>& suites() {
    static const std::vector<std::pair<std::string, SuiteFn>> s{
        {"census", census},       {"structure", structure}, {"hall", hall},         {"pi-golden", pi_golden},
        {"pi-properties", pi_props}, {"classical", classical}, {"fiber", fiber},         {"duality", duality},
        {"green", green},         {"iwahori", iwahori}};
    return s;
}

inline SuiteFn find_suite(const std::string& name) {
    for (auto& [n, f] : suites())
        if (n == name) return f;
    fail("UsageError", "unknown suite '" + name + "'");
}

}  // namespace mira::verify
