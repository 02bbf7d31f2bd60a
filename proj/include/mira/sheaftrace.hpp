#pragma once

// Frobenius traces of unipotent mirabolic character sheaves, the flag-count
// oracle for them, and the mirabolic Green bimodule over F_q.

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "mira/mirahall.hpp"

namespace mira {

// a(q) + b(q) s with s^2 = q
struct TraceCell {
    QPoly a, b;
    std::optional<int> q_value;

    static TraceCell from_laurent(const LaurentPoly& p, std::optional<int> q = {}) {
        TraceCell c;
        c.q_value = q;
        for (auto& [e, x] : p.terms()) {
            int h = e >= 0 ? e / 2 : -((-e + 1) / 2);
            if (h < 0) fail("NonPolynomialTrace", "negative power of q in " + p.str("s"));
            (e - 2 * h ? c.b : c.a) += QPoly::mono(h, x);
        }
        return c;
    }
    // (a(q), b(q)): the value a + b*sqrt(q)
    std::pair<Int, Int> eval(int q) const { return {a.eval(q), b.eval(q)}; }
    std::pair<Int, Int> eval() const {
        if (!q_value) fail("NoFieldSize", "TraceCell has no q");
        return eval(*q_value);
    }
    std::string str() const {
        if (b.is_zero()) return a.str();
        std::string bs = "(" + b.str() + ")*sqrt(q)";
        return a.is_zero() ? bs : a.str() + "+" + bs;
    }
    friend bool operator==(const TraceCell& x, const TraceCell& y) { return x.a == y.a && x.b == y.b; }
};

inline bool in_table(const PiTable& t, const Bipartition& x) {
    return std::find(t.order.begin(), t.order.end(), x) != t.order.end();
}

inline LaurentPoly trace_laurent(const Bipartition& col, const Bipartition& row, const PiTable& t) {
    if (!in_table(t, col)) fail("NotInTable", col.str());
    if (!in_table(t, row)) fail("NotInTable", row.str());
    return LaurentPoly::v(b_stat(row) - b_stat(col)) * pi_entry(t, row, col);
}

inline TraceCell trace_value(const Bipartition& col, const Bipartition& row, const PiTable& t, int q) {
    return TraceCell::from_laurent(trace_laurent(col, row, t), q);
}

// ---- flag-count oracle -------------------------------------------------

// x + y sqrt(q)
struct SqrtQ {
    Rat x = 0, y = 0;
    friend SqrtQ mul(const SqrtQ& a, const SqrtQ& b, const Int& q) {
        return {a.x * b.x + a.y * b.y * Rat(q), a.x * b.y + a.y * b.x};
    }
    friend bool operator==(const SqrtQ& a, const SqrtQ& b) { return a.x == b.x && a.y == b.y; }
    std::string str() const { return y == 0 ? x.str() : x.str() + "+" + y.str() + "*sqrt(q)"; }
};

inline SqrtQ inverse(const SqrtQ& a, const Int& q) {
    Rat nrm = a.x * a.x - a.y * a.y * Rat(q);
    if (nrm == 0) fail("DivisionByZero", "zero in Q(sqrt q)");
    return {a.x / nrm, -a.y / nrm};
}

struct FiberCell {
    Bipartition stratum;
    int m = 0;
    long long flags = 0;
    SqrtQ predicted;
    bool ok = false;
};

struct FiberReport {
    int n = 0, q = 0;
    SqrtQ epsilon;
    std::vector<FiberCell> cells;
    bool pass() const {
        return std::all_of(cells.begin(), cells.end(), [](const FiberCell& c) { return c.ok; });
    }
};

// sum over |lam| = n-m, |mu| = m of dim L_lam dim L_mu s^{b(stratum)-m} Pi_{stratum,(lam,mu)}(s)
inline LaurentPoly fiber_sum(const PiTable& t, const Bipartition& stratum, int m) {
    LaurentPoly s;
    for (auto& x : t.order) {
        if (int(x.mu.size()) != m) continue;
        LaurentPoly p = pi_entry(t, stratum, x);
        if (p.is_zero()) continue;
        s += p * LaurentPoly::mono(0, hook_dim(x.lam) * hook_dim(x.mu));
    }
    return s * LaurentPoly::v(b_stat(stratum) - m);
}

inline SqrtQ to_sqrtq(const LaurentPoly& p, int q) {
    auto [a, b] = eval_sqrt(p, q);
    return {a, b};
}

// Constant fixed by the open stratum ((n), empty) at m = 0.
inline SqrtQ calibrate_fiber(const PiTable& t, int q) {
    Bipartition open{Partition({t.n}), Partition()};
    if (t.n == 0) open = Bipartition{};
    long long c = count_admissible_flags(t.n, 0, normal_form_pair(open, q));
    return mul(SqrtQ{Rat(c), 0}, inverse(to_sqrtq(fiber_sum(t, open, 0), q), q), q);
}

inline FiberReport fiber_oracle_check(int n, int q, const PiTable& t, std::optional<SqrtQ> eps = {}) {
    if (!((q == 2 && n <= 4) || (q == 3 && n <= 3))) fail("CostGuard", "fiber oracle limited to n<=4 at q=2, n<=3 at q=3");
    if (t.n != n) fail("SizeMismatch", "table size differs from n");
    FiberReport rep;
    rep.n = n;
    rep.q = q;
    rep.epsilon = eps ? *eps : calibrate_fiber(t, q);
    for (auto& o : enumerate_orbit_reps(n, q))
        for (int m = 0; m <= n; ++m) {
            FiberCell c;
            c.stratum = o.label;
            c.m = m;
            c.flags = count_admissible_flags(n, m, o.pair);
            c.predicted = mul(rep.epsilon, to_sqrtq(fiber_sum(t, o.label, m), q), q);
            c.ok = c.predicted == SqrtQ{Rat(c.flags), 0};
            rep.cells.push_back(c);
        }
    return rep;
}

// ---- Green bimodule ----------------------------------------------------

// Monic polynomial over F_q, coefficients low to high.
using FqPoly = std::vector<int>;

inline int fq_degree(const FqPoly& f) { return int(f.size()) - 1; }

inline FqPoly fq_mul(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
    FqPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    return r;
}

inline std::vector<FqPoly> monic_polys(int q, int d) {
    std::vector<FqPoly> out;
    int total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    for (int c = 0; c < total; ++c) {
        FqPoly f(d + 1, 0);
        f[d] = 1;
        for (int i = 0, x = c; i < d; ++i, x /= q) f[i] = x % q;
        out.push_back(f);
    }
    return out;
}

// Irreducible monic polynomials of degree d over F_q, t excluded; by
// exhaustive products of lower-degree monics.
inline std::vector<FqPoly> irreducibles(int q, int d) {
    if (!is_prime(q)) fail("NotPrime", std::to_string(q));
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<FqPoly>> cache;
    std::lock_guard<std::mutex> g(mu);
    auto key = std::make_pair(q, d);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    FiniteField F(q);
    std::set<FqPoly> reducible;
    for (int a = 1; a <= d / 2; ++a)
        for (auto& x : monic_polys(q, a))
            for (auto& y : monic_polys(q, d - a)) reducible.insert(fq_mul(F, x, y));
    std::vector<FqPoly> out;
    FqPoly t{0, 1};
    for (auto& f : monic_polys(q, d))
        if (!reducible.count(f) && f != t) out.push_back(f);
    cache[key] = out;
    return out;
}

inline std::string fq_str(const FqPoly& f) {
    std::string s;
    for (int i = fq_degree(f); i >= 0; --i) {
        if (!f[i]) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || f[i] != 1) s += std::to_string(f[i]);
        if (i > 0) s += i == 1 ? "t" : "t^" + std::to_string(i);
    }
    return s;
}

// f -> bipartition, empty values dropped
struct GreenLabel {
    int q = 2;
    std::map<FqPoly, Bipartition> support;
    int size() const {
        int s = 0;
        for (auto& [f, b] : support) s += fq_degree(f) * b.size();
        return s;
    }
    static GreenLabel unit(int q) { return {q, {}}; }
    void set(const FqPoly& f, const Bipartition& b) {
        if (b.size() == 0)
            support.erase(f);
        else
            support[f] = b;
    }
    std::string str() const {
        std::string s = "{";
        for (auto& [f, b] : support) s += (s.size() > 1 ? ", " : "") + fq_str(f) + ":" + b.str();
        return s + "}";
    }
    friend bool operator<(const GreenLabel& a, const GreenLabel& b) {
        return std::tie(a.q, a.support) < std::tie(b.q, b.support);
    }
    friend bool operator==(const GreenLabel& a, const GreenLabel& b) { return a.q == b.q && a.support == b.support; }
};

// f -> partition: a basis label of the Green algebra
struct GreenAlgLabel {
    int q = 2;
    std::map<FqPoly, Partition> support;
    int size() const {
        int s = 0;
        for (auto& [f, p] : support) s += fq_degree(f) * p.size();
        return s;
    }
    void set(const FqPoly& f, const Partition& p) {
        if (p.size() == 0)
            support.erase(f);
        else
            support[f] = p;
    }
    std::string str() const {
        std::string s = "{";
        for (auto& [f, p] : support) s += (s.size() > 1 ? ", " : "") + fq_str(f) + ":" + p.str();
        return s + "}";
    }
    friend bool operator<(const GreenAlgLabel& a, const GreenAlgLabel& b) {
        return std::tie(a.q, a.support) < std::tie(b.q, b.support);
    }
};

using GreenVec = std::map<GreenLabel, Int>;
using GreenAlgVec = std::map<GreenAlgLabel, Int>;

inline void green_add(GreenVec& r, const GreenLabel& l, const Int& c) {
    if (c == 0) return;
    auto& s = r[l];
    s += c;
    if (s == 0) r.erase(l);
}

inline Int ipow_int(int q, int e) { return ipow(Int(q), unsigned(e)); }

// cls * x (left) or x * cls (right), factorwise G evaluated at q^{deg f}
inline GreenVec green_mul(Side side, const GreenAlgLabel& cls, const GreenVec& x) {
    GreenVec out;
    for (auto& [lab, coef] : x) {
        if (lab.q != cls.q) fail("FieldMismatch", std::to_string(lab.q) + " vs " + std::to_string(cls.q));
        std::vector<std::pair<GreenLabel, Int>> partial{{lab, coef}};
        for (auto& [f, nu] : cls.support) {
            auto it = lab.support.find(f);
            Bipartition src = it == lab.support.end() ? Bipartition{} : it->second;
            int sz = nu.size() + src.size();
            Int qf = ipow_int(cls.q, fq_degree(f));
            std::vector<std::pair<Bipartition, Int>> opts;
            for (auto& tgt : bipartitions_of(sz, sz)) {
                QPoly g = G_poly(side, nu, src, tgt);
                if (!g.is_zero()) opts.push_back({tgt, g.eval(qf)});
            }
            std::vector<std::pair<GreenLabel, Int>> next;
            for (auto& [pl, pc] : partial)
                for (auto& [tgt, gc] : opts) {
                    if (gc == 0) continue;
                    GreenLabel nl = pl;
                    nl.set(f, tgt);
                    next.push_back({nl, pc * gc});
                }
            partial.swap(next);
        }
        for (auto& [l, c] : partial) green_add(out, l, c);
    }
    return out;
}

inline GreenVec green_mul(Side side, const GreenAlgVec& a, const GreenVec& x) {
    GreenVec out;
    for (auto& [l, c] : a)
        for (auto& [t, d] : green_mul(side, l, x)) green_add(out, t, c * d);
    return out;
}

// Green algebra product, factorwise Hall constants at q^{deg f}
inline GreenAlgVec green_alg_mul(const GreenAlgLabel& a, const GreenAlgLabel& b) {
    if (a.q != b.q) fail("FieldMismatch", std::to_string(a.q) + " vs " + std::to_string(b.q));
    std::set<FqPoly> fs;
    for (auto& [f, p] : a.support) fs.insert(f);
    for (auto& [f, p] : b.support) fs.insert(f);
    std::vector<std::pair<GreenAlgLabel, Int>> partial{{GreenAlgLabel{a.q, {}}, 1}};
    for (auto& f : fs) {
        auto get = [&](const GreenAlgLabel& l) {
            auto it = l.support.find(f);
            return it == l.support.end() ? Partition() : it->second;
        };
        Partition mu = get(a), nu = get(b);
        Int qf = ipow_int(a.q, fq_degree(f));
        std::vector<std::pair<GreenAlgLabel, Int>> next;
        int sz = mu.size() + nu.size();
        for (auto& lam : partitions_of(sz)) {
            QPoly g = hall_const(lam, mu, nu);
            if (g.is_zero()) continue;
            Int gc = g.eval(qf);
            for (auto& [pl, pc] : partial) {
                GreenAlgLabel nl = pl;
                nl.set(f, lam);
                next.push_back({nl, pc * gc});
            }
        }
        partial.swap(next);
    }
    GreenAlgVec out;
    for (auto& [l, c] : partial) {
        auto& s = out[l];
        s += c;
        if (s == 0) out.erase(l);
    }
    return out;
}

// All maps f -> item with sum deg(f) * size = n, items drawn from items_of(k).
template <class Label, class Item, class ItemsOf>
std::vector<Label> labels_of_size(int n, int q, ItemsOf items_of) {
    std::vector<FqPoly> fs;
    for (int d = 1; d <= n; ++d)
        for (auto& f : irreducibles(q, d)) fs.push_back(f);
    std::vector<Label> out;
    Label cur{q, {}};
    auto rec = [&](auto&& self, size_t i, int rem) -> void {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        if (i == fs.size()) return;
        self(self, i + 1, rem);
        int d = fq_degree(fs[i]);
        for (int k = 1; k * d <= rem; ++k)
            for (const Item& it : items_of(k)) {
                cur.set(fs[i], it);
                self(self, i + 1, rem - k * d);
                cur.support.erase(fs[i]);
            }
    };
    rec(rec, 0, n);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<GreenLabel> green_labels(int n, int q) {
    return labels_of_size<GreenLabel, Bipartition>(n, q, [](int k) { return bipartitions_of(k); });
}
inline std::vector<GreenAlgLabel> green_alg_labels(int n, int q) {
    return labels_of_size<GreenAlgLabel, Partition>(n, q, [](int k) { return partitions_of(k); });
}

struct FreenessReport {
    int n = 0, q = 0;
    int rows = 0, cols = 0, rank = 0;
    bool free() const { return rows == cols && rank == rows; }
};

inline int rational_rank(std::vector<std::vector<Rat>> M) {
    int r = 0, nc = M.empty() ? 0 : int(M[0].size());
    for (int c = 0; c < nc && r < int(M.size()); ++c) {
        int p = -1;
        for (int i = r; i < int(M.size()); ++i)
            if (M[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(M[p], M[r]);
        for (int i = 0; i < int(M.size()); ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rat k = M[i][c] / M[r][c];
            for (int j = c; j < nc; ++j) M[i][j] -= k * M[r][j];
        }
        ++r;
    }
    return r;
}

// pi_a pi_0 pi_b for |a| + |b| = n, written in the pi-basis of size n
inline FreenessReport green_freeness_check(int n, int q, bool strict = true) {
    if (n > 2 || q > 3) fail("CostGuard", "freeness check limited to n<=2, q<=3");
    FreenessReport rep;
    rep.n = n;
    rep.q = q;
    auto basis = green_labels(n, q);
    std::map<GreenLabel, int> idx;
    for (int i = 0; i < int(basis.size()); ++i) idx[basis[i]] = i;
    std::vector<std::vector<Rat>> M;
    GreenVec one{{GreenLabel::unit(q), Int(1)}};
    for (int k = 0; k <= n; ++k)
        for (auto& a : green_alg_labels(k, q))
            for (auto& b : green_alg_labels(n - k, q)) {
                GreenVec x = green_mul(Side::Left, a, green_mul(Side::Right, b, one));
                std::vector<Rat> row(basis.size(), 0);
                for (auto& [l, c] : x) row.at(idx.at(l)) = Rat(c);
                M.push_back(row);
            }
    rep.rows = int(M.size());
    rep.cols = int(basis.size());
    rep.rank = rational_rank(M);
    if (strict && !rep.free())
        fail("NotFree", std::to_string(rep.rows) + "x" + std::to_string(rep.cols) + " rank " + std::to_string(rep.rank));
    return rep;
}

}  // namespace mira
