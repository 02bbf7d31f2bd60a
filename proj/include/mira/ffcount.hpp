#pragma once

// Brute-force counting over finite fields: Jordan and pair types, the
// invariant-subspace counts behind every Hall-type structure constant,
// admissible flags for the resolution fibers, and the orbit census.

#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <tuple>

#include "mira/exactring.hpp"
#include "mira/linalg.hpp"
#include "mira/partcomb.hpp"

namespace mira {

enum class Side { Left, Right };
inline const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

struct EnhancedPair {
    int q = 2;
    FpMat u;
    FpVec v;
    int n() const { return int(u.size()); }
};

inline EnhancedPair normal_form_pair(const Bipartition& bp, int q) {
    FiniteField f(q);
    auto nf = normal_form(f, bp);
    return {q, nf.u, nf.v};
}

inline Partition jordan_type(const FiniteField& f, const FpMat& u) {
    int n = int(u.size());
    if (n == 0) return Partition();
    return restriction_type(f, u, identity(f, n));
}

inline Bipartition pair_type(const EnhancedPair& p) {
    FiniteField f(p.q);
    if (p.n() == 0) return {};
    Partition nu = jordan_type(f, p.u);
    auto imgs = image_powers(f, p.u);
    Partition th = quotient_type(f, imgs, cyclic_span(f, p.u, FpMat{p.v}));
    return xi(nu, th);
}

namespace detail {

// Vectors of B that extend a basis of A to a basis of A + B.
inline FpMat extend_basis(const FiniteField& f, const FpMat& A, const FpMat& B) {
    FpMat cur = A, out;
    int r = rank(f, cur);
    for (auto& b : B) {
        cur.push_back(b);
        int r2 = rank(f, cur);
        if (r2 > r) { out.push_back(b); r = r2; }
        else cur.pop_back();
    }
    return out;
}

// Calls fn on one spanning vector per line of span(C), C independent.
inline void for_each_line(const FiniteField& f, const FpMat& C, const std::function<void(const FpVec&)>& fn) {
    int c = int(C.size());
    for (int lead = 0; lead < c; ++lead) {
        std::vector<int> val(c - lead - 1, 0);
        while (true) {
            FpVec x = C[lead];
            for (int t = 0; t < int(val.size()); ++t)
                if (val[t])
                    for (size_t r = 0; r < x.size(); ++r) x[r] = f.add(x[r], f.mul(val[t], C[lead + 1 + t][r]));
            fn(x);
            size_t t = 0;
            while (t < val.size() && ++val[t] == f.q) val[t++] = 0;
            if (t == val.size()) break;
        }
    }
}

// Calls fn on the RREF basis of every u-invariant W with A <= W <= B and
// dim W = k (A, B invariant, A <= B). Grown one line at a time: from W, add
// a line of (u^{-1}W cap B)/W; duplicates are merged by RREF.
inline void for_each_invariant_subspace(const FiniteField& f, const FpMat& u, const FpMat& A, const FpMat& B, int k,
                                        const std::function<void(const FpMat&)>& fn) {
    int n = int(u.size());
    FpMat a0 = A;
    rref(f, a0);
    if (int(a0.size()) > k) return;
    std::set<FpMat> layer{a0};
    std::vector<FpVec> uB;
    for (auto& b : B) uB.push_back(apply(f, u, b));
    for (int dim = int(a0.size()); dim < k && !layer.empty(); ++dim) {
        std::set<FpMat> next;
        for (auto& W : layer) {
            // x = sum c_i B_i with u x in W: kernel of [uB | W] on (c, d)
            int nb = int(B.size()), nw = int(W.size());
            FpMat T(n, FpVec(nb + nw, 0));
            for (int r = 0; r < n; ++r) {
                for (int i = 0; i < nb; ++i) T[r][i] = uB[i][r];
                for (int j = 0; j < nw; ++j) T[r][nb + j] = W[j][r];
            }
            FpMat pre;
            for (auto& cd : kernel(f, T, nb + nw)) {
                FpVec x(n, 0);
                for (int i = 0; i < nb; ++i)
                    if (cd[i])
                        for (int r = 0; r < n; ++r) x[r] = f.add(x[r], f.mul(cd[i], B[i][r]));
                pre.push_back(x);
            }
            FpMat C = extend_basis(f, W, pre);
            for_each_line(f, C, [&](const FpVec& x) {
                FpMat W2 = W;
                W2.push_back(x);
                rref(f, W2);
                next.insert(std::move(W2));
            });
        }
        layer = std::move(next);
    }
    for (auto& W : layer) fn(W);
}

}  // namespace detail

using TypeCounts = std::map<std::pair<Partition, Bipartition>, long long>;

// Tallies, over one normal-form representative of tgt, the (nu, src) types of
// all admissible subspaces of dimension k:
//   left:  u-invariant W with Im u^a <= W <= Ker u^m; nu = type of u|W,
//          src = type of the pair induced on D/W;
//   right: u-invariant D' containing v with Im u^m + k[u]v <= D' <= Ker u^a;
//          src = type of (u|D', v), nu = type of u on D/D'.
// Any (nu, src) with nu_1 <= m and (lam'+mu')_1 <= a is counted completely.
inline TypeCounts tally_types(Side side, const EnhancedPair& rep, int k, int a, int m) {
    FiniteField f(rep.q);
    TypeCounts out;
    NilPair<FiniteField> nf{rep.n(), rep.u, rep.v};
    int n = nf.n;
    if (n == 0) {
        if (k == 0) out[{Partition(), Bipartition{}}] = 1;
        return out;
    }
    auto imgs = image_powers(f, nf.u);
    auto power = [&](int e) {
        FpMat p = identity(f, n);
        for (int i = 0; i < e; ++i) p = matmul(f, nf.u, p);
        return p;
    };
    auto ker_pow = [&](int e) { return kernel(f, power(e), n); };
    auto img_pow = [&](int e) { return e < int(imgs.size()) ? imgs[e] : FpMat{}; };
    FpMat cv = cyclic_span(f, nf.u, FpMat{nf.v});

    FpMat A, B;
    if (side == Side::Left) {
        A = img_pow(a);
        B = ker_pow(m);
    } else {
        A = row_basis(f, concat<FiniteField>(img_pow(m), cv));
        B = ker_pow(a);
    }
    if (rank(f, concat<FiniteField>(B, A)) != rank(f, B)) return out;  // A not inside B
    detail::for_each_invariant_subspace(f, nf.u, A, B, k, [&](const FpMat& W) {
        if (side == Side::Left) {
            Partition nu = restriction_type(f, nf.u, W);
            Partition qn = quotient_type(f, imgs, W);
            Partition qt = quotient_type(f, imgs, concat<FiniteField>(W, cv));
            ++out[{nu, xi(qn, qt)}];
        } else {
            Partition nu = quotient_type(f, imgs, W);
            Partition rn = restriction_type(f, nf.u, W);
            // type of u on D'/k[u]v
            std::vector<int> d;
            FpMat cur = W;
            int dc = int(cv.size());
            for (int e = 0; e <= n + 1; ++e) {
                int x = rank(f, concat<FiniteField>(cur, cv)) - dc;
                d.push_back(x);
                if (x == 0) break;
                cur = image_of(f, nf.u, cur);
            }
            Partition rt = type_from_dims(d);
            ++out[{nu, xi(rn, rt)}];
        }
    });
    return out;
}

inline TypeCounts tally_types(Side side, const Bipartition& tgt, int k, int a, int m, int q) {
    return tally_types(side, normal_form_pair(tgt, q), k, a, m);
}

// Degree bound for tally_types: the dimension of the Grassmannian swept.
inline int tally_degree_bound(Side side, const Bipartition& tgt, int k, int a, int m) {
    FiniteField f(2);
    auto nf = normal_form(f, tgt);
    int n = nf.n;
    if (n == 0) return 0;
    auto rk_pow = [&](int e) {
        FpMat p = identity(f, n);
        for (int i = 0; i < e; ++i) p = matmul(f, nf.u, p);
        return rank(f, p);
    };
    // ranks of u^e do not depend on the field for the normal form
    int dimA, dimB;
    if (side == Side::Left) {
        dimA = rk_pow(a);
        dimB = n - rk_pow(m);
    } else {
        auto imgs = image_powers(f, nf.u);
        FpMat im = m < int(imgs.size()) ? imgs[m] : FpMat{};
        dimA = rank(f, concat<FiniteField>(im, cyclic_span(f, nf.u, FpMat{nf.v})));
        dimB = n - rk_pow(a);
    }
    int c = dimB - dimA, kk = k - dimA;
    if (c < 0 || kk < 0 || kk > c) return 0;
    return kk * (c - kk);
}

using TypePolys = std::map<std::pair<Partition, Bipartition>, QPoly>;

namespace detail {
struct TallyCache {
    std::mutex m;
    std::map<std::tuple<int, Bipartition, int, int, int, int>, TypeCounts> counts;
    std::map<std::tuple<int, Bipartition, int, int, int>, TypePolys> polys;
    std::map<std::tuple<int, Partition, Bipartition, Bipartition>, QPoly> single;
};
inline TallyCache& tally_cache() {
    static TallyCache c;
    return c;
}
}  // namespace detail

inline TypeCounts tally_types_cached(Side side, const Bipartition& tgt, int k, int a, int m, int q) {
    auto& c = detail::tally_cache();
    auto key = std::make_tuple(int(side), tgt, k, a, m, q);
    {
        std::lock_guard<std::mutex> g(c.m);
        auto it = c.counts.find(key);
        if (it != c.counts.end()) return it->second;
    }
    auto r = tally_types(side, tgt, k, a, m, q);
    std::lock_guard<std::mutex> g(c.m);
    c.counts.emplace(key, r);
    return r;
}

// Degree bound for one type: the admissible W of a given type sit among the
// invariant subspaces with sub and quotient Jordan types fixed, which a Hall
// polynomial of degree n(whole) - n(sub) - n(quotient) counts.
inline int type_degree_bound(const Bipartition& tgt, const Partition& nu, const Bipartition& src) {
    return std::max(0, n_stat(tgt.nu()) - n_stat(nu) - n_stat(src.nu()));
}

// Interpolated polynomial counts: each type uses its degree bound + 1 fields
// and one more as a consistency check.
inline TypePolys tally_polys(Side side, const Bipartition& tgt, int k, int a, int m) {
    auto& c = detail::tally_cache();
    auto key = std::make_tuple(int(side), tgt, k, a, m);
    {
        std::lock_guard<std::mutex> g(c.m);
        auto it = c.polys.find(key);
        if (it != c.polys.end()) return it->second;
    }
    int grass = tally_degree_bound(side, tgt, k, a, m);
    auto bound = [&](const std::pair<Partition, Bipartition>& kk) {
        return std::min(grass, type_degree_bound(tgt, kk.first, kk.second));
    };
    std::vector<TypeCounts> per;
    std::set<std::pair<Partition, Bipartition>> keys;
    int need = 2;
    for (int i = 0; i < need; ++i) {
        if (i >= int(sample_field_sizes().size())) fail("CostGuard", "ran out of sample fields");
        per.push_back(tally_types_cached(side, tgt, k, a, m, sample_field_sizes()[i]));
        for (auto& [kk, v] : per.back()) {
            keys.insert(kk);
            need = std::max(need, bound(kk) + 2);
        }
    }
    TypePolys out;
    for (auto& kk : keys) {
        int d = bound(kk);
        std::vector<std::pair<Int, Int>> s;
        for (int i = 0; i < d + 2; ++i) {
            auto it = per[i].find(kk);
            s.push_back({sample_field_sizes()[i], it == per[i].end() ? 0 : it->second});
        }
        out[kk] = interpolate(s, d);
    }
    std::lock_guard<std::mutex> g(c.m);
    c.polys.emplace(key, out);
    return out;
}

namespace detail {
inline void check_sizes(const Partition& nu, const Bipartition& src, const Bipartition& tgt) {
    if (nu.size() + src.size() != tgt.size())
        fail("SizeMismatch", "|" + nu.str() + "|+|" + src.str() + "| != |" + tgt.str() + "|");
}
inline std::tuple<int, int, int> tally_params(Side side, const Partition& nu, const Bipartition& src) {
    int k = side == Side::Left ? nu.size() : src.size();
    return {k, src.nu().first(), nu.first()};
}
}  // namespace detail

inline long long count_G(Side side, const Partition& nu, const Bipartition& src, const Bipartition& tgt, int q) {
    detail::check_sizes(nu, src, tgt);
    auto [k, a, m] = detail::tally_params(side, nu, src);
    auto t = tally_types_cached(side, tgt, k, a, m, q);
    auto it = t.find({nu, src});
    return it == t.end() ? 0 : it->second;
}

inline bool diagram_contains(const Partition& big, const Partition& small) {
    for (int i = 0; i < small.length(); ++i)
        if (small[i] > big[i]) return false;
    return true;
}

inline QPoly G_poly(Side side, const Partition& nu, const Bipartition& src, const Bipartition& tgt) {
    detail::check_sizes(nu, src, tgt);
    // sub and quotient Jordan types fit inside the whole
    Partition whole = tgt.nu();
    if (!diagram_contains(whole, nu) || !diagram_contains(whole, src.nu())) return QPoly();
    auto [k, a, m] = detail::tally_params(side, nu, src);
    auto& c = detail::tally_cache();
    auto key = std::make_tuple(int(side), nu, src, tgt);
    {
        std::lock_guard<std::mutex> g(c.m);
        auto it = c.single.find(key);
        if (it != c.single.end()) return it->second;
    }
    int d = std::min(tally_degree_bound(side, tgt, k, a, m), type_degree_bound(tgt, nu, src));
    std::vector<std::pair<Int, Int>> s;
    for (int i = 0; i < d + 2; ++i) {
        int q = sample_field_sizes().at(i);
        auto t = tally_types_cached(side, tgt, k, a, m, q);
        auto it = t.find({nu, src});
        s.push_back({q, it == t.end() ? 0 : it->second});
    }
    QPoly r = interpolate(s, d);
    std::lock_guard<std::mutex> g(c.m);
    c.single.emplace(key, r);
    return r;
}

// Complete flags with u F_k <= F_{k-1} and v in F_{n-m}.
inline long long count_admissible_flags(int n, int m, const EnhancedPair& p) {
    if (p.n() != n) fail("SizeMismatch", "pair dimension differs from n");
    if (m < 0 || m > n) fail("SizeMismatch", "m out of range");
    FiniteField f(p.q);
    long long total = 0;
    auto rec = [&](auto&& self, const FpMat& F, int k) -> void {
        if (k == n - m) {
            FpMat t = F;
            t.push_back(p.v);
            if (rank(f, t) != int(F.size())) return;
        }
        if (k == n) { ++total; return; }
        // preimage of F under u, as the kernel of x -> (u x reduced modulo F)
        FpMat Fb = row_basis(f, F);
        std::vector<int> pivc;
        for (auto& row : Fb)
            for (int c = 0; c < n; ++c)
                if (row[c]) { pivc.push_back(c); break; }
        FpMat M(n, FpVec(n, 0));
        for (int j = 0; j < n; ++j) {
            FpVec e(n, 0);
            e[j] = 1;
            FpVec y = apply(f, p.u, e);
            for (size_t r = 0; r < Fb.size(); ++r) {
                int c = y[pivc[r]];
                if (!c) continue;
                for (int x = 0; x < n; ++x) y[x] = f.sub(y[x], f.mul(c, Fb[r][x]));
            }
            for (int i = 0; i < n; ++i) M[i][j] = y[i];
        }
        FpMat pre = kernel(f, M, n);
        FpMat C = detail::extend_basis(f, Fb, pre);
        detail::for_each_line(f, C, [&](const FpVec& x) { self(self, concat<FiniteField>(F, FpMat{x}), k + 1); });
    };
    rec(rec, FpMat{}, 0);
    return total;
}

// ---- orbit census ------------------------------------------------------

struct OrbitRep {
    EnhancedPair pair;
    Bipartition label;
};

// One representative per GL_n(F_q)-orbit on nilpotent x vector. Nilpotent
// classes are the Jordan forms; for each, vectors are split into orbits of
// the centralizer's unit group by BFS under random units. Distinct pair
// invariants bound the orbit count from below, the BFS from above; a gap
// between the two is reported as an error.
inline std::vector<OrbitRep> enumerate_orbit_reps(int n, int q, int max_n = 4, int max_q = 3,
                                                  unsigned seed = 12345) {
    if (n > max_n || q > max_q) fail("CostGuard", "orbit census limited to n<=" + std::to_string(max_n));
    FiniteField f(q);
    std::vector<OrbitRep> out;
    if (n == 0) {
        out.push_back({{q, {}, {}}, {}});
        return out;
    }
    std::mt19937 rng(seed);
    for (auto& nu : partitions_of(n)) {
        auto nf = normal_form(f, Bipartition{Partition(), nu});
        const FpMat& J = nf.u;
        // centralizer algebra: X with XJ = JX, as a kernel in n^2 unknowns
        FpMat sys;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                FpVec row(n * n, 0);
                for (int k = 0; k < n; ++k) {
                    // (XJ)_{ij} = sum_k X_{ik} J_{kj};  (JX)_{ij} = sum_k J_{ik} X_{kj}
                    if (J[k][j]) row[i * n + k] = f.add(row[i * n + k], J[k][j]);
                    if (J[i][k]) row[k * n + j] = f.sub(row[k * n + j], J[i][k]);
                }
                sys.push_back(row);
            }
        FpMat cb = kernel(f, sys, n * n);
        std::vector<FpMat> gens;
        std::uniform_int_distribution<int> dist(0, q - 1);
        int tries = 0;
        while (gens.size() < 24 && tries < 10000) {
            ++tries;
            FpMat X(n, FpVec(n, 0));
            for (auto& b : cb) {
                int c = dist(rng);
                if (!c) continue;
                for (int i = 0; i < n * n; ++i) X[i / n][i % n] = f.add(X[i / n][i % n], f.mul(c, b[i]));
            }
            if (rank(f, X) == n) gens.push_back(X);
        }
        int total = 1;
        for (int i = 0; i < n; ++i) total *= q;
        auto encode = [&](const FpVec& v) { int c = 0; for (int i = n - 1; i >= 0; --i) c = c * q + v[i]; return c; };
        auto decode = [&](int c) { FpVec v(n); for (int i = 0; i < n; ++i) { v[i] = c % q; c /= q; } return v; };
        std::vector<int> orbit(total, -1);
        int norb = 0;
        std::set<Bipartition> labels;
        std::vector<OrbitRep> local;
        for (int s = 0; s < total; ++s) {
            if (orbit[s] >= 0) continue;
            std::vector<int> stack{s};
            orbit[s] = norb;
            while (!stack.empty()) {
                int c = stack.back();
                stack.pop_back();
                FpVec v = decode(c);
                for (auto& g : gens) {
                    int d = encode(apply(f, g, v));
                    if (orbit[d] < 0) { orbit[d] = norb; stack.push_back(d); }
                }
            }
            EnhancedPair p{q, J, decode(s)};
            Bipartition lab = pair_type(p);
            labels.insert(lab);
            local.push_back({p, lab});
            ++norb;
        }
        if (int(labels.size()) != norb)
            fail("CensusGap", "Jordan type " + nu.str() + ": " + std::to_string(labels.size()) +
                                  " invariant classes vs " + std::to_string(norb) + " BFS orbits");
        out.insert(out.end(), local.begin(), local.end());
    }
    return out;
}

// Random element of GL_n(F_q).
inline FpMat random_gl(const FiniteField& f, int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> d(0, f.q - 1);
    while (true) {
        FpMat g(n, FpVec(n));
        for (auto& r : g)
            for (auto& x : r) x = d(rng);
        if (rank(f, g) == n) return g;
    }
}

inline EnhancedPair conjugate_pair(const EnhancedPair& p, const FpMat& g) {
    FiniteField f(p.q);
    FpMat gi;
    if (!invert(f, g, gi)) fail("Singular", "conjugating matrix");
    return {p.q, matmul(f, matmul(f, g, p.u), gi), apply(f, g, p.v)};
}

}  // namespace mira
