#pragma once

// Partitions, bipartitions, signatures and their statistics; the
// Achar-Henderson order; the relabeling maps upsilon / xi computed from the
// normal form of an enhanced nilpotent pair.

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mira/error.hpp"
#include "mira/linalg.hpp"

namespace mira {

class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> il) : Partition(std::vector<int>(il)) {}
    explicit Partition(std::vector<int> parts) : p_(std::move(parts)) {
        while (!p_.empty() && p_.back() == 0) p_.pop_back();
        for (size_t i = 0; i < p_.size(); ++i) {
            if (p_[i] <= 0) fail("InvalidPartition", "nonpositive part in " + raw_str());
            if (i && p_[i] > p_[i - 1]) fail("InvalidPartition", "increasing parts in " + raw_str());
        }
    }
    const std::vector<int>& parts() const { return p_; }
    int length() const { return int(p_.size()); }
    bool empty() const { return p_.empty(); }
    int size() const { return std::accumulate(p_.begin(), p_.end(), 0); }
    // i is 0-based; zero beyond the length
    int operator[](int i) const { return i < int(p_.size()) ? p_[i] : 0; }
    int first() const { return (*this)[0]; }

    friend bool operator==(const Partition& a, const Partition& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Partition& a, const Partition& b) { return a.p_ != b.p_; }
    friend bool operator<(const Partition& a, const Partition& b) { return a.p_ < b.p_; }

    std::string str() const { return raw_str(); }

private:
    std::string raw_str() const {
        std::string s = "(";
        for (size_t i = 0; i < p_.size(); ++i) s += (i ? "," : "") + std::to_string(p_[i]);
        return s + ")";
    }
    std::vector<int> p_;
};

struct Bipartition {
    Partition lam, mu;
    int size() const { return lam.size() + mu.size(); }
    int length() const { return std::max(lam.length(), mu.length()); }
    // nu = lam + mu
    Partition nu() const {
        std::vector<int> v(length());
        for (int i = 0; i < length(); ++i) v[i] = lam[i] + mu[i];
        return Partition(v);
    }
    friend bool operator==(const Bipartition& a, const Bipartition& b) {
        return a.lam == b.lam && a.mu == b.mu;
    }
    friend bool operator!=(const Bipartition& a, const Bipartition& b) { return !(a == b); }
    friend bool operator<(const Bipartition& a, const Bipartition& b) {
        return a.lam != b.lam ? a.lam < b.lam : a.mu < b.mu;
    }
    std::string str() const { return "(" + lam.str() + "," + mu.str() + ")"; }
};

// Weakly decreasing N-tuple of integers, negatives allowed.
struct Signature {
    std::vector<int> e;
    explicit Signature(std::vector<int> entries) : e(std::move(entries)) {
        for (size_t i = 1; i < e.size(); ++i)
            if (e[i] > e[i - 1]) fail("InvalidSignature", "entries must be weakly decreasing");
    }
    int rank() const { return int(e.size()); }
    int min() const { return e.empty() ? 0 : e.back(); }
};

inline Signature to_signature(const Partition& p, int N) {
    if (p.length() > N) fail("RankTooSmall", p.str() + " has more than " + std::to_string(N) + " parts");
    std::vector<int> e(N);
    for (int i = 0; i < N; ++i) e[i] = p[i];
    return Signature(e);
}
// (-s_N, ..., -s_1)
inline Signature star(const Signature& s) {
    std::vector<int> e(s.e.rbegin(), s.e.rend());
    for (auto& x : e) x = -x;
    return Signature(e);
}
inline Signature shift(const Signature& s, int k) {
    auto e = s.e;
    for (auto& x : e) x += k;
    return Signature(e);
}
inline Partition to_partition(const Signature& s) {
    if (s.min() < 0) fail("NegativeEntry", "signature has a negative entry");
    return Partition(s.e);
}

inline Partition conjugate(const Partition& p) {
    std::vector<int> c(p.first(), 0);
    for (int x : p.parts())
        for (int k = 0; k < x; ++k) ++c[k];
    return Partition(c);
}

// n(p) = sum (i-1) p_i
inline int n_stat(const Partition& p) {
    int s = 0;
    for (int i = 0; i < p.length(); ++i) s += i * p[i];
    return s;
}

inline std::vector<Partition> partitions_of(int n, int maxpart = -1, int maxlen = -1) {
    std::vector<Partition> out;
    if (n < 0) return out;
    if (maxpart < 0) maxpart = n;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rem, int mx) -> void {
        if (rem == 0) { out.emplace_back(cur); return; }
        if (maxlen >= 0 && int(cur.size()) >= maxlen) return;
        for (int k = std::min(rem, mx); k >= 1; --k) {
            cur.push_back(k);
            self(self, rem - k, k);
            cur.pop_back();
        }
    };
    rec(rec, n, maxpart);
    return out;
}

struct Stats {
    int n_lambda, n_mu, n_nu, d_nu, ell, b;
};

inline Stats stats(const Bipartition& bp, int N) {
    if (bp.lam.length() > N || bp.mu.length() > N)
        fail("RankTooSmall", bp.str() + " at N=" + std::to_string(N));
    Stats s{};
    s.n_lambda = n_stat(bp.lam);
    s.n_mu = n_stat(bp.mu);
    Partition nu = bp.nu();
    s.n_nu = n_stat(nu);
    s.d_nu = nu.size() * (N - 1) - 2 * s.n_nu;
    s.ell = s.d_nu + bp.lam.size();
    s.b = 2 * s.n_lambda + 2 * s.n_mu + bp.mu.size();
    return s;
}
// b needs no rank
inline int b_stat(const Bipartition& bp) { return 2 * n_stat(bp.lam) + 2 * n_stat(bp.mu) + bp.mu.size(); }

// lam1, lam1+mu1, lam1+mu1+lam2, ... of the given length
inline std::vector<int> ah_chain(const Bipartition& bp, int len) {
    std::vector<int> c(len);
    int s = 0;
    for (int k = 0; k < len; ++k) {
        s += (k % 2 == 0) ? bp.lam[k / 2] : bp.mu[k / 2];
        c[k] = s;
    }
    return c;
}

inline bool ah_leq(const Bipartition& a, const Bipartition& b) {
    if (a.size() != b.size()) fail("SizeMismatch", a.str() + " vs " + b.str());
    int len = 2 * std::max(a.length(), b.length());
    auto ca = ah_chain(a, len), cb = ah_chain(b, len);
    for (int k = 0; k < len; ++k)
        if (ca[k] > cb[k]) return false;
    return true;
}

// Sorted by descending chain vector: a linear extension of the reversed AH
// order, largest element first.
inline std::vector<Bipartition> bipartitions_of(int n) {
    std::vector<Bipartition> out;
    if (n < 0) return out;
    for (int k = n; k >= 0; --k)
        for (auto& l : partitions_of(k))
            for (auto& m : partitions_of(n - k)) out.push_back({l, m});
    int len = 2 * std::max(n, 1);
    std::sort(out.begin(), out.end(), [&](const Bipartition& a, const Bipartition& b) {
        return ah_chain(a, len) > ah_chain(b, len);
    });
    return out;
}

inline std::vector<Bipartition> bipartitions_of(int n, int N) {
    std::vector<Bipartition> out;
    for (auto& b : bipartitions_of(n))
        if (b.length() <= N) out.push_back(b);
    return out;
}

// ---- nilpotent pairs in normal form --------------------------------------

template <class F>
struct NilPair {
    int n = 0;
    Mat<F> u;  // n x n
    Vec<F> v;
};

// u is the direct sum of Jordan blocks of sizes nu_i = lam_i + mu_i with
// cyclic generators w_i (basis w_i, u w_i, ...), and v = sum u^{mu_i} w_i.
template <class F>
NilPair<F> normal_form(const F& f, const Bipartition& bp) {
    Partition nu = bp.nu();
    NilPair<F> r;
    r.n = nu.size();
    r.u.assign(r.n, Vec<F>(r.n, f.zero()));
    r.v.assign(r.n, f.zero());
    int off = 0;
    for (int i = 0; i < nu.length(); ++i) {
        int s = nu[i];
        for (int a = 0; a + 1 < s; ++a) r.u[off + a + 1][off + a] = f.one();
        if (bp.mu[i] < s) r.v[off + bp.mu[i]] = f.one();
        off += s;
    }
    return r;
}

// Rows spanning k[u] x for the given vectors.
template <class F>
Mat<F> cyclic_span(const F& f, const Mat<F>& u, const Mat<F>& xs) {
    Mat<F> out;
    int n = int(u.size());
    for (auto x : xs) {
        for (int k = 0; k <= n; ++k) {
            out.push_back(x);
            x = apply(f, u, x);
        }
    }
    return row_basis(f, out);
}

// Basis rows of Im u^k for k = 0.. until zero.
template <class F>
std::vector<Mat<F>> image_powers(const F& f, const Mat<F>& u) {
    int n = int(u.size());
    std::vector<Mat<F>> out;
    Mat<F> cur = identity(f, n);
    while (true) {
        cur = row_basis(f, cur);
        out.push_back(cur);
        if (cur.empty()) break;
        cur = image_of(f, u, cur);
    }
    return out;
}

// Number of blocks of each size >= k from a decreasing dimension sequence.
inline Partition type_from_dims(const std::vector<int>& d) {
    std::vector<int> ct;
    for (size_t k = 0; k + 1 < d.size(); ++k)
        if (d[k] - d[k + 1] > 0) ct.push_back(d[k] - d[k + 1]);
    for (size_t k = 1; k < ct.size(); ++k)
        if (ct[k] > ct[k - 1]) fail("NotInvariant", "dimension data is not a Jordan type");
    return conjugate(Partition(ct));
}

// Jordan type of the operator induced by u on D/S, S u-invariant.
template <class F>
Partition quotient_type(const F& f, const std::vector<Mat<F>>& imgs, const Mat<F>& S) {
    int ds = rank(f, S);
    std::vector<int> d;
    for (auto& im : imgs) {
        int x = rank(f, concat<F>(im, S)) - ds;
        d.push_back(x);
        if (x == 0) break;
    }
    if (d.back() != 0) fail("NotNilpotent", "images do not reach the subspace");
    return type_from_dims(d);
}

// Jordan type of u restricted to the u-invariant subspace spanned by S.
template <class F>
Partition restriction_type(const F& f, const Mat<F>& u, Mat<F> S) {
    std::vector<int> d;
    int n = int(u.size());
    for (int k = 0; k <= n + 1; ++k) {
        S = row_basis(f, S);
        d.push_back(int(S.size()));
        if (S.empty()) break;
        S = image_of(f, u, S);
    }
    if (d.back() != 0) fail("NotNilpotent", "restriction is not nilpotent");
    return type_from_dims(d);
}

inline std::pair<Partition, Partition> upsilon(const Bipartition& bp) {
    RationalField f;
    auto nf = normal_form(f, bp);
    if (nf.n == 0) return {Partition(), Partition()};
    auto imgs = image_powers(f, nf.u);
    Partition nu = quotient_type(f, imgs, Mat<RationalField>{});
    Partition th = quotient_type(f, imgs, cyclic_span(f, nf.u, Mat<RationalField>{nf.v}));
    return {nu, th};
}

namespace detail {
struct XiCache {
    std::mutex m;
    std::map<Partition, std::map<Partition, std::vector<Bipartition>>> by_nu;
};
inline XiCache& xi_cache() {
    static XiCache c;
    return c;
}
// all (lam, mu) with lam + mu = nu
inline std::vector<Bipartition> splittings(const Partition& nu) {
    std::vector<Bipartition> out;
    int L = nu.length();
    std::vector<int> lam(L);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == L) {
            std::vector<int> mu(L);
            for (int k = 0; k < L; ++k) mu[k] = nu[k] - lam[k];
            for (int k = 1; k < L; ++k)
                if (mu[k] > mu[k - 1]) return;
            out.push_back({Partition(lam), Partition(mu)});
            return;
        }
        int hi = i ? std::min(nu[i], lam[i - 1]) : nu[i];
        for (int x = hi; x >= 0; --x) {
            lam[i] = x;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}
}  // namespace detail

inline Bipartition xi(const Partition& nu, const Partition& theta) {
    auto& c = detail::xi_cache();
    auto lookup = [&](const std::map<Partition, std::vector<Bipartition>>& table) {
        auto it = table.find(theta);
        if (it == table.end()) fail("NotInImage", "(" + nu.str() + "," + theta.str() + ")");
        if (it->second.size() > 1)
            fail("Ambiguous", "(" + nu.str() + "," + theta.str() + ") has " +
                                  std::to_string(it->second.size()) + " preimages");
        return it->second.front();
    };
    {
        std::lock_guard<std::mutex> g(c.m);
        auto it = c.by_nu.find(nu);
        if (it != c.by_nu.end()) return lookup(it->second);
    }
    std::map<Partition, std::vector<Bipartition>> table;
    for (auto& bp : detail::splittings(nu)) table[upsilon(bp).second].push_back(bp);
    {
        std::lock_guard<std::mutex> g(c.m);
        c.by_nu.emplace(nu, table);
    }
    return lookup(table);
}

}  // namespace mira
