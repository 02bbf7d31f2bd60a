#pragma once

// Mirabolic bimodule over the affine Hecke algebra, Iwahori level, in a
// finite lattice truncation. Products T_x T_s are counted over F_q.

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "mira/exactring.hpp"
#include "mira/linalg.hpp"

namespace mira {

inline long floordiv(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

struct AffinePerm {
    int N = 1;
    std::vector<int> window;  // w(1..N)

    AffinePerm() = default;
    AffinePerm(int n, std::vector<int> w) : N(n), window(std::move(w)) {
        if (N < 1 || int(window.size()) != N) fail("NotAPermutation", "window size differs from N");
        std::vector<bool> seen(N, false);
        for (int x : window) {
            int r = int(((x % N) + N) % N);
            if (seen[r]) fail("NotAPermutation", "residues repeat");
            seen[r] = true;
        }
    }
    static AffinePerm identity(int n) {
        std::vector<int> w(n);
        for (int i = 0; i < n; ++i) w[i] = i + 1;
        return {n, w};
    }
    long operator()(long m) const {
        long r = ((m - 1) % N + N) % N;
        return window[r] + (m - 1 - r);
    }
    long inverse(long x) const {
        for (int r = 0; r < N; ++r)
            if (((x - window[r]) % N + N) % N == 0) return r + 1 + (x - window[r]);
        fail("NotAPermutation", "no preimage");
    }
    int span() const {
        int s = 0;
        for (int m = 1; m <= N; ++m) s = std::max(s, std::abs(window[m - 1] - m));
        return s;
    }
    int length() const {
        int s = span(), c = 0;
        for (long i = 1; i <= N; ++i)
            for (long j = i + 1; j <= i + 2 * s + N + 1; ++j)
                if ((*this)(i) > (*this)(j)) ++c;
        return c;
    }
    int component() const {
        long s = 0;
        for (int m = 1; m <= N; ++m) s += window[m - 1] - m;
        return int(floordiv(s, N));
    }
    // w s_i and w tau^d
    AffinePerm times_s(int i) const {
        std::vector<int> w(N);
        for (int m = 1; m <= N; ++m) w[m - 1] = int((*this)(s_index(i, m)));
        return {N, w};
    }
    AffinePerm times_tau(int d) const {
        std::vector<int> w(N);
        for (int m = 1; m <= N; ++m) w[m - 1] = int((*this)(m + d));
        return {N, w};
    }
    // s_i swaps i + cN and i + 1 + cN
    long s_index(int i, long m) const {
        if (N == 1) return m;
        long r = ((m - i) % N + N) % N;
        return r == 0 ? m + 1 : r == 1 ? m - 1 : m;
    }
    friend bool operator==(const AffinePerm& a, const AffinePerm& b) { return a.N == b.N && a.window == b.window; }
    friend bool operator<(const AffinePerm& a, const AffinePerm& b) { return std::tie(a.N, a.window) < std::tie(b.N, b.window); }
};

// beta = (-inf, lo] u extra, extra above lo+1; canonical when lo+1 is not in extra
struct BetaSet {
    long lo = 0;
    std::set<long> extra;

    static BetaSet below(long lo) { return {lo, {}}; }
    void canon() {
        for (auto it = extra.begin(); it != extra.end();) {
            if (*it <= lo) it = extra.erase(it);
            else ++it;
        }
        while (extra.count(lo + 1)) extra.erase(++lo);
    }
    bool contains(long k) const { return k <= lo || extra.count(k); }
    long hi() const { return extra.empty() ? lo : *extra.rbegin(); }
    // membership on (lo, hi]
    std::vector<bool> bits() const {
        std::vector<bool> b;
        for (long k = lo + 1; k <= hi(); ++k) b.push_back(contains(k));
        return b;
    }
    BetaSet toggled(long k) const {
        BetaSet r = *this;
        if (!contains(k))
            r.extra.insert(k);
        else if (k > lo)
            r.extra.erase(k);
        else {
            for (long x = k + 1; x <= lo; ++x) r.extra.insert(x);
            r.lo = k - 1;
        }
        r.canon();
        return r;
    }
    BetaSet shifted(long d) const {
        BetaSet r{lo + d, {}};
        for (long x : extra) r.extra.insert(x + d);
        return r;
    }
    int length() const {
        int a = 0, b = 0;
        for (long k = 1; k <= lo; ++k) ++a;
        for (long k : extra)
            if (k > 0) ++a;
        for (long k = lo + 1; k <= 0; ++k)
            if (!contains(k)) ++b;
        return a - b;
    }
    friend bool operator==(const BetaSet& a, const BetaSet& b) { return a.lo == b.lo && a.extra == b.extra; }
    friend bool operator<(const BetaSet& a, const BetaSet& b) { return std::tie(a.lo, a.extra) < std::tie(b.lo, b.extra); }
};

struct RBAffElt {
    AffinePerm w;
    BetaSet beta;

    int N() const { return w.N; }
    int length() const { return w.length() + beta.length(); }
    int component() const { return w.component(); }
    std::string str() const {
        std::string s = "([";
        for (int i = 0; i < w.N; ++i) s += (i ? "," : "") + std::to_string(w.window[i]);
        s += "],<=" + std::to_string(beta.lo);
        for (long x : beta.extra) s += "," + std::to_string(x);
        return s + ")";
    }
    friend bool operator==(const RBAffElt& a, const RBAffElt& b) { return a.w == b.w && a.beta == b.beta; }
    friend bool operator<(const RBAffElt& a, const RBAffElt& b) { return std::tie(a.w, a.beta) < std::tie(b.w, b.beta); }
};

// first (i, j) with i not in beta, j in beta, i < j, w(i) < w(j)
inline std::optional<std::pair<long, long>> incompatibility(const AffinePerm& w, const BetaSet& b) {
    int s = w.span(), N = w.N;
    long a = b.lo - 3 * N - s, c = b.hi() + 3 * N + s;
    for (long i = a; i <= c; ++i) {
        if (b.contains(i)) continue;
        for (long j = i + 1; j <= c; ++j)
            if (b.contains(j) && w(i) < w(j)) return std::make_pair(i, j);
    }
    return std::nullopt;
}

inline RBAffElt validate(const AffinePerm& w, BetaSet b) {
    b.canon();
    if (auto bad = incompatibility(w, b))
        fail("Incompatible", "(i,j)=(" + std::to_string(bad->first) + "," + std::to_string(bad->second) + ")");
    return {w, b};
}

// x[d]: T_x T_tau^d
inline RBAffElt shift(const RBAffElt& x, int d) { return {x.w.times_tau(d), x.beta.shifted(-d)}; }

// (ws, s(beta))
inline RBAffElt times_s(const RBAffElt& x, int i) {
    AffinePerm ws = x.w.times_s(i);
    BetaSet b{x.beta.lo - 1, {}};
    for (long k = x.beta.lo - 1; k <= x.beta.hi() + 2; ++k)
        if (x.beta.contains(x.w.s_index(i, k))) b.extra.insert(k);
    b.canon();
    return {ws, b};
}

inline RBAffElt beta_toggle(const RBAffElt& x, long k) { return {x.w, x.beta.toggled(k)}; }

// ---- Bruhat order from rank functions ------------------------------------

namespace detail {
struct RankData {
    std::vector<int> r, rr;  // r_jk, r_<jk>, row-major over [A,B]^2
};
inline RankData rank_data(const RBAffElt& x, long A, long B, long T) {
    RankData d;
    long n = B - A + 1;
    d.r.assign(n * n, 0);
    d.rr.assign(n * n, 0);
    for (long j = A; j <= B; ++j)
        for (long k = A; k <= B; ++k) {
            int c = 0;
            for (long m = T + 1; m <= k; ++m)
                if (x.w(m) <= j) ++c;
            bool delta = true;
            for (long m = k + 1; m <= x.beta.hi() && delta; ++m)
                if (x.beta.contains(m) && x.w(m) > j) delta = false;
            d.r[(j - A) * n + (k - A)] = c;
            d.rr[(j - A) * n + (k - A)] = c + delta;
        }
    return d;
}
inline bool leq_on(const RBAffElt& a, const RBAffElt& b, int margin) {
    int N = a.N(), s = std::max(a.w.span(), b.w.span());
    long A = std::min(a.beta.lo, b.beta.lo) - margin - s;
    long B = std::max(a.beta.hi(), b.beta.hi()) + margin + s;
    long T = A - 2 * s - 2 * N;
    auto ra = rank_data(a, A, B, T), rb = rank_data(b, A, B, T);
    for (size_t i = 0; i < ra.r.size(); ++i)
        if (ra.r[i] < rb.r[i] || ra.rr[i] < rb.rr[i]) return false;
    return true;
}
}  // namespace detail

inline bool bruhat_leq(const RBAffElt& a, const RBAffElt& b) {
    if (a.N() != b.N() || a.component() != b.component())
        fail("ComponentMismatch", a.str() + " vs " + b.str());
    int N = a.N();
    bool x = detail::leq_on(a, b, 3 * N), y = detail::leq_on(a, b, 4 * N);
    if (x != y) fail("TruncationTooSmall", "rank comparison not stable for " + a.str() + " vs " + b.str());
    return x;
}

// ---- truncated lattice model ---------------------------------------------

// Basis e_m, L < m <= H; F^1_j = span(e_m : m <= j).
struct LatticeModel {
    FiniteField f;
    int N;
    long L, H;
    LatticeModel(int q, int n, long lo, long hi) : f(q), N(n), L(lo), H(hi) {}
    int dim() const { return int(H - L); }
    bool inside(long m) const { return L < m && m <= H; }
    FpVec e(long m) const {
        FpVec v(dim(), 0);
        if (inside(m)) v[m - L - 1] = 1;
        return v;
    }
};

// A periodic flag F_k, given by generators for each k.
using FlagFn = std::function<FpMat(long)>;

struct Triple {
    FlagFn F;
    FpVec v;
};

inline Triple representative(const LatticeModel& M, const RBAffElt& x) {
    int s = x.w.span();
    long from = M.L - s - M.N;
    Triple t;
    auto w = x.w;
    t.F = [&M, w, from](long k) {
        FpMat g;
        for (long m = from; m <= k; ++m)
            if (M.inside(w(m))) g.push_back(M.e(w(m)));
        return g;
    };
    t.v.assign(M.dim(), 0);
    for (long k = from; k <= x.beta.hi(); ++k)
        if (x.beta.contains(k) && M.inside(w(k))) t.v[w(k) - M.L - 1] = 1;
    return t;
}

namespace detail {
// top-pivot echelon: rows keyed by highest nonzero coordinate
struct TopEchelon {
    const FiniteField* f;
    std::map<int, FpVec> rows;
    int reduce(FpVec& x) const {
        for (int c = int(x.size()) - 1; c >= 0; --c) {
            if (!x[c]) continue;
            auto it = rows.find(c);
            if (it == rows.end()) return c;
            int k = f->mul(x[c], f->inv(it->second[c]));
            for (int i = 0; i <= c; ++i) x[i] = f->sub(x[i], f->mul(k, it->second[i]));
        }
        return -1;
    }
    int insert(FpVec x) {
        int c = reduce(x);
        if (c >= 0) rows[c] = x;
        return c;
    }
};
}  // namespace detail

// The (w, beta) of a triple (F^1, F, v), read off from ranks. kwin bounds the
// window on which beta is read; it must show two members below and two
// non-members above.
inline RBAffElt classify_triple(const LatticeModel& M, const Triple& t, std::pair<long, long> kwin) {
    const FiniteField& f = M.f;
    int N = M.N;
    std::vector<int> w(N);
    {
        detail::TopEchelon E{&f, {}};
        for (auto& g : t.F(0)) E.insert(g);
        for (int k = 1; k <= N; ++k) {
            int piv = -1;
            for (auto& g : t.F(k)) {
                int c = E.insert(g);
                if (c >= 0) {
                    if (piv >= 0) fail("TruncationTooSmall", "flag step is not one-dimensional");
                    piv = c;
                }
            }
            if (piv < 0) fail("TruncationTooSmall", "flag step is empty");
            w[k - 1] = int(piv + M.L + 1);
        }
    }
    AffinePerm wp(N, w);
    auto [a, b] = kwin;
    std::vector<bool> inb;
    for (long k = a; k <= b; ++k) {
        // v in F^1_{w(k)-1} + F_{k-1}: project away coordinates below w(k)
        long cut = wp(k) - M.L - 1;
        if (cut < 0 || cut > M.dim()) fail("TruncationTooSmall", "w(k) outside the model");
        auto proj = [&](const FpVec& x) { return FpVec(x.begin() + cut, x.end()); };
        FpMat G;
        for (auto& g : t.F(k - 1)) G.push_back(proj(g));
        int r0 = G.empty() ? 0 : rank(f, G);
        G.push_back(proj(t.v));
        inb.push_back(rank(f, G) > r0);
    }
    if (inb.size() < 4 || !inb[0] || !inb[1] || inb[inb.size() - 1] || inb[inb.size() - 2])
        fail("TruncationTooSmall", "beta window too narrow");
    BetaSet beta{a - 1, {}};
    for (long k = a; k <= b; ++k)
        if (inb[k - a]) beta.extra.insert(k);
    beta.canon();
    return {wp, beta};
}

namespace detail {
struct Window {
    long L, H, ka, kb;
};
inline Window window_for(const RBAffElt& x, int margin) {
    int N = x.N(), s = x.w.span() + 1;
    long ka = x.beta.lo - 3 * N - 2 * s - margin, kb = x.beta.hi() + 3 * N + 2 * s + margin;
    return {ka - 2 * N - 2 * s - 4, kb + 2 * N + 2 * s + 4, ka, kb};
}
}  // namespace detail

// Types of the flags F with F_k = F^2_k for k != i mod N and F_k != F^2_k
// otherwise, tallied at one field size.
inline std::map<RBAffElt, long long> s_neighbours(const RBAffElt& x, int i, int q, int margin = 0) {
    int N = x.N();
    if (i < 1 || i > N) fail("BadGenerator", "i must lie in 1..N");
    auto W = detail::window_for(x, margin);
    LatticeModel M(q, N, W.L, W.H);
    const FiniteField& f = M.f;
    Triple base = representative(M, x);
    std::map<RBAffElt, long long> out;
    auto w = x.w;
    auto F2 = base.F;
    // lines a e_{w(k)} + b e_{w(k+1)} other than e_{w(k)} itself
    std::vector<std::pair<int, int>> lines;
    for (int b = 1; b < q; ++b) lines.push_back({1, b});
    lines.push_back({0, 1});
    for (auto [a, b] : lines) {
        Triple t;
        t.v = base.v;
        t.F = [&, a = a, b = b](long k) {
            if (((k - i) % N + N) % N != 0) return F2(k);
            FpMat g = F2(k - 1);
            FpVec x1 = M.e(w(k)), x2 = M.e(w(k + 1)), y(M.dim());
            for (int c = 0; c < M.dim(); ++c) y[c] = f.add(f.mul(a, x1[c]), f.mul(b, x2[c]));
            g.push_back(y);
            return g;
        };
        ++out[classify_triple(M, t, {W.ka, W.kb})];
    }
    return out;
}

// ---- products ---------------------------------------------------------

using RBVec = std::map<RBAffElt, QPoly>;

inline void rb_add(RBVec& r, const RBAffElt& x, const QPoly& c) {
    if (c.is_zero()) return;
    auto& s = r[x];
    s += c;
    if (s.is_zero()) r.erase(x);
}

class IwahoriEngine {
public:
    explicit IwahoriEngine(std::vector<int> qs, int margin = 0) : qs_(std::move(qs)), margin_(margin) {
        if (qs_.size() < 2) fail("InsufficientSamples", "need at least two field sizes");
    }
    const std::vector<int>& qs() const { return qs_; }

    // neighbour tallies, interpolated in q (degree <= 1)
    const RBVec& neighbours(const RBAffElt& x, int i) {
        auto key = std::make_pair(x, i);
        {
            std::lock_guard<std::mutex> g(m_);
            if (auto it = nb_.find(key); it != nb_.end()) return it->second;
        }
        std::map<RBAffElt, std::vector<std::pair<Int, Int>>> s;
        for (size_t a = 0; a < qs_.size(); ++a) {
            auto t = s_neighbours(x, i, qs_[a], margin_);
            for (auto& [z, c] : t) {
                auto& v = s[z];
                while (v.size() < a) v.push_back({qs_[v.size()], 0});
                v.push_back({qs_[a], c});
            }
        }
        RBVec r;
        for (auto& [z, v] : s) {
            while (v.size() < qs_.size()) v.push_back({qs_[v.size()], 0});
            rb_add(r, z, interpolate(v, 1));
        }
        std::lock_guard<std::mutex> g(m_);
        return nb_.emplace(key, std::move(r)).first->second;
    }

    // T_x T_{s_i}: the coefficient of T_z is the number of s-neighbours of a
    // representative of z having type x
    RBVec ts_action(const RBAffElt& x, int i) {
        RBVec out;
        RBVec nx = neighbours(x, i);
        for (auto& [z, c] : nx) {
            const RBVec& nz = neighbours(z, i);
            auto it = nz.find(x);
            if (it != nz.end()) rb_add(out, z, it->second);
        }
        return out;
    }

    RBVec ts_action(const RBVec& a, int i) {
        RBVec out;
        for (auto& [x, c] : a)
            for (auto& [z, d] : ts_action(x, i)) rb_add(out, z, c * d);
        return out;
    }

private:
    std::vector<int> qs_;
    int margin_;
    std::mutex m_;
    std::map<std::pair<RBAffElt, int>, RBVec> nb_;
};

// ---- five-case templates ---------------------------------------------

struct PatternMatch {
    int case_id = 0;
    long lift = 0;  // the k = i mod N whose k+1 is toggled in the primed elements
    bool up = false;
};

inline std::vector<std::pair<int, RBVec>> templates(const RBAffElt& x, int i, long k) {
    QPoly q = QPoly::q(), one(1);
    RBAffElt xs = times_s(x, i), xp = beta_toggle(x, k + 1), xsp = beta_toggle(xs, k + 1), xps = times_s(xp, i);
    auto vec = [](std::vector<std::pair<RBAffElt, QPoly>> t) {
        RBVec r;
        for (auto& [z, c] : t) rb_add(r, z, c);
        return r;
    };
    bool up = xs.w.length() > x.w.length();
    std::vector<std::pair<int, RBVec>> out;
    if (up) {
        out.push_back({1, vec({{xs, one}})});
        out.push_back({2, vec({{xs, one}, {xsp, one}})});
    } else {
        out.push_back({3, vec({{xp, one}, {xps, one}})});
        out.push_back({4, vec({{x, q - one}, {xs, q}})});
        out.push_back({5, vec({{x, q - QPoly(2)}, {xp, q - one}, {xs, q - one}})});
    }
    return out;
}

inline PatternMatch pattern_check(const RBAffElt& x, int i, const RBVec& prod) {
    int N = x.N();
    std::set<int> cases;
    PatternMatch pm;
    pm.up = times_s(x, i).w.length() > x.w.length();
    bool have = false;
    // search the lift nearest to i first
    std::vector<long> ks;
    for (int c = 0; c <= 4; ++c) {
        ks.push_back(i + long(c) * N);
        if (c) ks.push_back(i - long(c) * N);
    }
    for (long k : ks)
        for (auto& [id, t] : templates(x, i, k))
            if (t == prod) {
                cases.insert(id);
                if (!have) {
                    pm.case_id = id;
                    pm.lift = k;
                    have = true;
                }
            }
    if (cases.size() != 1) fail("NoTemplateMatch", x.str() + " s_" + std::to_string(i) + ": " + std::to_string(cases.size()) + " cases");
    return pm;
}

// H_x (H_s - v^{-1}) in the basis H_z = (-v)^{-l(z)} T_z
inline std::map<RBAffElt, LaurentPoly> h_shape(const RBAffElt& x, const RBVec& prod) {
    std::map<RBAffElt, LaurentPoly> out;
    RBVec p = prod;
    rb_add(p, x, QPoly(1));
    for (auto& [z, c] : p) {
        LaurentPoly e = c.to_laurent() * LaurentPoly::negv(z.length() - x.length() - 1);
        if (!e.is_zero()) out[z] = e;
    }
    return out;
}

inline std::map<RBAffElt, LaurentPoly> expected_h_shape(const RBAffElt& x, int i, const PatternMatch& pm) {
    RBAffElt xs = times_s(x, i), xp = beta_toggle(x, pm.lift + 1), xsp = beta_toggle(xs, pm.lift + 1),
             xps = times_s(xp, i);
    LaurentPoly one(1), vinv = LaurentPoly::v(-1), v = LaurentPoly::v(1);
    std::map<RBAffElt, LaurentPoly> r;
    auto add = [&](const RBAffElt& z, const LaurentPoly& c) {
        r[z] += c;
        if (r[z].is_zero()) r.erase(z);
    };
    switch (pm.case_id) {
        case 1: add(xs, one); add(x, -vinv); break;
        case 2: add(xs, one); add(xsp, -vinv); add(x, -vinv); break;
        case 3: add(xp, one); add(x, -vinv); add(xps, -vinv); break;
        case 4: add(xs, one); add(x, -v); break;
        case 5:
            add(x, vinv - v);
            add(xp, one - LaurentPoly::v(-2));
            add(xs, one - LaurentPoly::v(-2));
            break;
        default: fail("NoTemplateMatch", "unknown case");
    }
    return r;
}

// ---- enumeration -------------------------------------------------------

// Valid (w, beta) with |w(m) - m| <= W and beta = (-inf, lo] u extra, where
// lo in [-W, W-1] and extra within (lo+1, lo+W+1].
inline std::vector<RBAffElt> enumerate_rb(int N, int W) {
    std::set<RBAffElt> out;
    std::vector<int> w(N);
    auto rec = [&](auto&& self, int m) -> void {
        if (m == N) {
            std::vector<bool> seen(N, false);
            for (int x : w) {
                int r = ((x % N) + N) % N;
                if (seen[r]) return;
                seen[r] = true;
            }
            AffinePerm p(N, w);
            for (long lo = -W; lo <= W - 1; ++lo)
                for (int mask = 0; mask < (1 << (W + 1)); ++mask) {
                    BetaSet b{lo, {}};
                    for (int k = 0; k <= W; ++k)
                        if (mask >> k & 1) b.extra.insert(lo + 1 + k);
                    b.canon();
                    if (!incompatibility(p, b)) out.insert({p, b});
                }
            return;
        }
        for (int x = m + 1 - W; x <= m + 1 + W; ++x) {
            w[m] = x;
            self(self, m + 1);
        }
    };
    rec(rec, 0);
    return {out.begin(), out.end()};
}

}  // namespace mira
