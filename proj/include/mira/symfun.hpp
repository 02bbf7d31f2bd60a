#pragma once

// Symmetric polynomials in N variables with LaurentPoly coefficients:
// monomial, Schur and Hall-Littlewood bases, Kostka numbers and
// Kostka-Foulkes polynomials. The Hall-Littlewood parameter t is stored as
// v^{-2}.

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "mira/exactring.hpp"
#include "mira/partcomb.hpp"

namespace mira {

enum class Basis { Monomial, Schur, HallLittlewood };
inline const char* basis_name(Basis b) {
    switch (b) {
        case Basis::Monomial: return "monomial";
        case Basis::Schur: return "schur";
        default: return "hall_littlewood";
    }
}

struct SymPoly {
    Basis basis = Basis::Monomial;
    int rank = 0;
    std::map<Partition, LaurentPoly> coeffs;

    void add(const Partition& p, const LaurentPoly& c) {
        if (c.is_zero()) return;
        auto& slot = coeffs[p];
        slot += c;
        if (slot.is_zero()) coeffs.erase(p);
    }
    LaurentPoly coeff(const Partition& p) const {
        auto it = coeffs.find(p);
        return it == coeffs.end() ? LaurentPoly() : it->second;
    }
    friend bool operator==(const SymPoly& a, const SymPoly& b) {
        return a.basis == b.basis && a.rank == b.rank && a.coeffs == b.coeffs;
    }
};

struct TensorSym {
    Basis basis = Basis::Schur;
    int rank = 0;
    std::map<std::pair<Partition, Partition>, LaurentPoly> coeffs;
    void add(const Partition& a, const Partition& b, const LaurentPoly& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(a, b);
        auto& slot = coeffs[key];
        slot += c;
        if (slot.is_zero()) coeffs.erase(key);
    }
    friend bool operator==(const TensorSym& a, const TensorSym& b) {
        return a.basis == b.basis && a.rank == b.rank && a.coeffs == b.coeffs;
    }
};

inline void require_same(const SymPoly& a, const SymPoly& b) {
    if (a.basis != b.basis) fail("BasisMismatch", std::string(basis_name(a.basis)) + " vs " + basis_name(b.basis));
    if (a.rank != b.rank) fail("RankMismatch", std::to_string(a.rank) + " vs " + std::to_string(b.rank));
}

inline SymPoly operator+(SymPoly a, const SymPoly& b) {
    require_same(a, b);
    for (auto& [p, c] : b.coeffs) a.add(p, c);
    return a;
}
inline SymPoly operator-(SymPoly a, const SymPoly& b) {
    require_same(a, b);
    for (auto& [p, c] : b.coeffs) a.add(p, -c);
    return a;
}
inline SymPoly scale(SymPoly a, const LaurentPoly& c) {
    SymPoly r{a.basis, a.rank, {}};
    for (auto& [p, x] : a.coeffs) r.add(p, x * c);
    return r;
}

// ---- explicit polynomials in N variables ---------------------------------

using Expo = std::vector<int>;
template <class C> using MPoly = std::map<Expo, C>;

template <class C>
void mp_add(MPoly<C>& a, const Expo& e, const C& c) {
    if (c == C(0)) return;
    auto it = a.find(e);
    if (it == a.end()) { a.emplace(e, c); return; }
    it->second += c;
    if (it->second == C(0)) a.erase(it);
}
template <class C>
MPoly<C> mp_mul(const MPoly<C>& a, const MPoly<C>& b) {
    MPoly<C> r;
    for (auto& [ea, ca] : a)
        for (auto& [eb, cb] : b) {
            Expo e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            mp_add(r, e, C(ca * cb));
        }
    return r;
}

inline void check_rank(const Partition& p, int N) {
    if (p.length() > N) fail("RankTooSmall", p.str() + " needs at least " + std::to_string(p.length()) + " variables");
}

// Sorted-decreasing exponent vector as a partition, or none if negative.
inline Partition sorted_partition(Expo e) {
    std::sort(e.rbegin(), e.rend());
    return Partition(e);
}

template <class C>
MPoly<C> monomial_poly(const Partition& lam, int N) {
    check_rank(lam, N);
    Expo e(N);
    for (int i = 0; i < N; ++i) e[i] = lam[i];
    std::sort(e.begin(), e.end());
    MPoly<C> r;
    do r[e] = C(1);
    while (std::next_permutation(e.begin(), e.end()));
    return r;
}

template <class C>
MPoly<C> elementary_poly(int k, int N) {
    if (k < 0 || k > N) return {};
    std::vector<int> ones(k, 1);
    return monomial_poly<C>(Partition(ones), N);
}

// Reads the monomial-basis coefficients of a symmetric polynomial.
template <class C>
std::map<Partition, C> to_monomial_coeffs(const MPoly<C>& p) {
    std::map<Partition, C> out;
    for (auto& [e, c] : p)
        if (std::is_sorted(e.rbegin(), e.rend())) out[Partition(e)] = c;
    return out;
}

inline SymPoly sympoly_from_mpoly(const MPoly<LaurentPoly>& p, int N) {
    SymPoly r{Basis::Monomial, N, {}};
    for (auto& [lam, c] : to_monomial_coeffs(p)) r.add(lam, c);
    return r;
}

inline MPoly<LaurentPoly> mpoly_from_monomial(const SymPoly& a) {
    if (a.basis != Basis::Monomial) fail("BasisMismatch", "expected monomial basis");
    MPoly<LaurentPoly> r;
    for (auto& [lam, c] : a.coeffs)
        for (auto& [e, one] : monomial_poly<LaurentPoly>(lam, a.rank)) mp_add(r, e, c);
    return r;
}

inline SymPoly mul_monomial(const SymPoly& a, const SymPoly& b) {
    require_same(a, b);
    if (a.basis != Basis::Monomial) fail("BasisMismatch", "multiplication is done in the monomial basis");
    return sympoly_from_mpoly(mp_mul(mpoly_from_monomial(a), mpoly_from_monomial(b)), a.rank);
}

// ---- Schur via the dual Jacobi-Trudi determinant det(e_{lam'_i - i + j}) ----

inline SymPoly schur_expand(const Partition& lam, int N) {
    check_rank(lam, N);
    Partition lc = conjugate(lam);
    int L = lc.length();
    using IP = MPoly<Int>;
    std::vector<IP> e(N + 1);
    for (int k = 0; k <= N; ++k) e[k] = elementary_poly<Int>(k, N);
    auto entry = [&](int i, int j) -> const IP* {
        int k = lc[i] - i + j;
        static const IP zero;
        if (k < 0 || k > N) return &zero;
        return &e[k];
    };
    // Laplace expansion along rows, memoized on the set of used columns.
    std::map<unsigned, IP> memo;
    auto det = [&](auto&& self, int row, unsigned used) -> IP {
        if (row == L) return IP{{Expo(N, 0), Int(1)}};
        auto it = memo.find(used);
        if (it != memo.end()) return it->second;
        IP acc;
        int sign = 1;
        for (int c = 0; c < L; ++c) {
            if (used & (1u << c)) continue;
            const IP* a = entry(row, c);
            if (!a->empty()) {
                IP sub = self(self, row + 1, used | (1u << c));
                IP prod = mp_mul(*a, sub);
                for (auto& [ex, co] : prod) mp_add(acc, ex, Int(sign * co));
            }
            sign = -sign;
        }
        memo[used] = acc;
        return acc;
    };
    IP s = det(det, 0, 0u);
    SymPoly r{Basis::Monomial, N, {}};
    for (auto& [mu, c] : to_monomial_coeffs(s)) r.add(mu, LaurentPoly(c));
    return r;
}

// Number of semistandard tableaux of shape lam and content mu.
inline Int kostka_number(const Partition& lam, const Partition& mu) {
    if (lam.size() != mu.size()) return 0;
    static std::mutex mtx;
    static std::map<std::pair<Partition, Partition>, Int> memo;
    {
        std::lock_guard<std::mutex> g(mtx);
        auto it = memo.find({lam, mu});
        if (it != memo.end()) return it->second;
    }
    Int r = 0;
    if (mu.empty()) r = lam.empty() ? 1 : 0;
    else {
        // strip the largest entry: a horizontal strip of size mu_last
        int last = mu[mu.length() - 1];
        std::vector<int> mrest(mu.parts().begin(), mu.parts().end() - 1);
        Partition mr(mrest);
        int L = lam.length();
        std::vector<int> nu(L);
        auto rec = [&](auto&& self, int i, int rem) -> void {
            if (i == L) {
                if (rem == 0) r += kostka_number(Partition(nu), mr);
                return;
            }
            int lo = lam[i + 1];  // horizontal strip: lam_{i+1} <= nu_i <= lam_i
            for (int x = lam[i]; x >= lo; --x) {
                int take = lam[i] - x;
                if (take > rem) break;
                nu[i] = x;
                self(self, i + 1, rem - take);
            }
        };
        rec(rec, 0, last);
    }
    std::lock_guard<std::mutex> g(mtx);
    memo[{lam, mu}] = r;
    return r;
}

// ---- Hall-Littlewood via the antisymmetrizer -------------------------------
// P_lam = (1/v_lam(t)) sum_w w( x^lam prod_{i<j} (x_i - t x_j)/(x_i - x_j) ).
// Each monomial x^alpha of x^lam prod (x_i - t x_j) with distinct exponents
// contributes sign * s_{sort(alpha) - delta}.

namespace detail {
inline const MPoly<QPoly>& hl_kernel(int N) {
    static std::mutex mtx;
    static std::map<int, MPoly<QPoly>> cache;
    std::lock_guard<std::mutex> g(mtx);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    MPoly<QPoly> p{{Expo(N, 0), QPoly(1)}};
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            Expo ei(N, 0), ej(N, 0);
            ei[i] = 1;
            ej[j] = 1;
            MPoly<QPoly> f{{ei, QPoly(1)}, {ej, -QPoly::q()}};
            p = mp_mul(p, f);
        }
    return cache.emplace(N, std::move(p)).first->second;
}

// v_m(t) = prod_{k=1}^m (1 - t^k)/(1 - t)
inline QPoly v_m(int m) {
    QPoly r = 1;
    for (int k = 1; k <= m; ++k) {
        QPoly num = QPoly(1) - QPoly::q(k);
        r *= num.divexact(QPoly(1) - QPoly::q());
    }
    return r;
}
}  // namespace detail

// Schur coefficients of P_lam as polynomials in t.
inline std::map<Partition, QPoly> hl_schur_coeffs(const Partition& lam, int N) {
    check_rank(lam, N);
    const auto& K = detail::hl_kernel(N);
    std::map<Partition, QPoly> sc;
    for (auto& [e, c] : K) {
        Expo a(N);
        for (int i = 0; i < N; ++i) a[i] = e[i] + lam[i];
        // sort decreasing with sign; skip repeated exponents
        Expo s = a;
        int sign = 1;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j + 1 < N - i; ++j)
                if (s[j] < s[j + 1]) { std::swap(s[j], s[j + 1]); sign = -sign; }
        bool distinct = true;
        for (int i = 0; i + 1 < N; ++i)
            if (s[i] == s[i + 1]) distinct = false;
        if (!distinct) continue;
        Expo b(N);
        for (int i = 0; i < N; ++i) b[i] = s[i] - (N - 1 - i);
        Partition beta(b);
        auto& slot = sc[beta];
        slot += sign > 0 ? c : -c;
    }
    // divide by v_lam(t), zero parts counted as a multiplicity
    std::map<int, int> mult;
    for (int i = 0; i < N; ++i) ++mult[lam[i]];
    QPoly vl = 1;
    for (auto& [part, m] : mult) vl *= detail::v_m(m);
    std::map<Partition, QPoly> out;
    for (auto& [beta, c] : sc)
        if (!c.is_zero()) out[beta] = c.divexact(vl);
    return out;
}

// t -> v^{-2}
inline LaurentPoly t_to_v(const QPoly& p) {
    LaurentPoly r;
    for (auto& [e, c] : p.terms()) r.add_term(-2 * e, c);
    return r;
}

inline SymPoly hl_expand(const Partition& lam, int N) {
    if (N > 6) fail("CostGuard", "symmetrization limited to N <= 6");
    check_rank(lam, N);
    static std::mutex mtx;
    static std::map<std::pair<Partition, int>, SymPoly> cache;
    {
        std::lock_guard<std::mutex> g(mtx);
        auto it = cache.find({lam, N});
        if (it != cache.end()) return it->second;
    }
    SymPoly r{Basis::Monomial, N, {}};
    for (auto& [beta, c] : hl_schur_coeffs(lam, N)) {
        LaurentPoly cv = t_to_v(c);
        for (auto& mu : partitions_of(lam.size(), -1, N)) {
            Int k = kostka_number(beta, mu);
            if (k != 0) r.add(mu, cv * LaurentPoly(k));
        }
    }
    std::lock_guard<std::mutex> g(mtx);
    cache.emplace(std::make_pair(lam, N), r);
    return r;
}

inline SymPoly schur_expand_cached(const Partition& lam, int N) {
    static std::mutex mtx;
    static std::map<std::pair<Partition, int>, SymPoly> cache;
    {
        std::lock_guard<std::mutex> g(mtx);
        auto it = cache.find({lam, N});
        if (it != cache.end()) return it->second;
    }
    SymPoly r = schur_expand(lam, N);
    std::lock_guard<std::mutex> g(mtx);
    cache.emplace(std::make_pair(lam, N), r);
    return r;
}

// Rewrites a monomial-basis element in a unitriangular basis by peeling the
// lexicographically largest remaining term.
template <class Expand>
SymPoly peel(SymPoly a, Basis target, Expand expand) {
    if (a.basis != Basis::Monomial) fail("BasisMismatch", "peel expects the monomial basis");
    SymPoly out{target, a.rank, {}};
    while (!a.coeffs.empty()) {
        auto it = std::prev(a.coeffs.end());
        Partition lam = it->first;
        LaurentPoly c = it->second;
        SymPoly e = expand(lam, a.rank);
        if (e.coeff(lam) != LaurentPoly(1)) fail("NotUnitriangular", lam.str());
        out.add(lam, c);
        a = a - scale(e, c);
    }
    return out;
}

inline SymPoly to_monomial(const SymPoly& a) {
    if (a.basis == Basis::Monomial) return a;
    SymPoly r{Basis::Monomial, a.rank, {}};
    for (auto& [lam, c] : a.coeffs) {
        SymPoly e = a.basis == Basis::Schur ? schur_expand_cached(lam, a.rank) : hl_expand(lam, a.rank);
        r = r + scale(e, c);
    }
    return r;
}

inline SymPoly convert(const SymPoly& a, Basis target) {
    SymPoly m = to_monomial(a);
    if (target == Basis::Monomial) return m;
    if (target == Basis::Schur) return peel(m, target, schur_expand_cached);
    return peel(m, target, hl_expand);
}

// Coefficient of P_mu in s_lam, in t = v^{-2}.
inline LaurentPoly kostka_foulkes(const Partition& lam, const Partition& mu, int N) {
    if (lam.size() != mu.size()) fail("SizeMismatch", lam.str() + " vs " + mu.str());
    check_rank(lam, N);
    check_rank(mu, N);
    static std::mutex mtx;
    static std::map<std::pair<Partition, int>, SymPoly> cache;
    SymPoly hl;
    bool found = false;
    {
        std::lock_guard<std::mutex> g(mtx);
        auto it = cache.find({lam, N});
        if (it != cache.end()) { hl = it->second; found = true; }
    }
    if (!found) {
        hl = peel(schur_expand_cached(lam, N), Basis::HallLittlewood, hl_expand);
        std::lock_guard<std::mutex> g(mtx);
        cache.emplace(std::make_pair(lam, N), hl);
    }
    return hl.coeff(mu);
}

inline bool dominates(const Partition& a, const Partition& b) {
    int sa = 0, sb = 0;
    for (int i = 0; i < std::max(a.length(), b.length()); ++i) {
        sa += a[i];
        sb += b[i];
        if (sa < sb) return false;
    }
    return true;
}

// Number of standard tableaux by the hook length formula.
inline Int hook_dim(const Partition& lam) {
    Int num = 1;
    for (int k = 2; k <= lam.size(); ++k) num *= k;
    Partition lc = conjugate(lam);
    Int den = 1;
    for (int i = 0; i < lam.length(); ++i)
        for (int j = 0; j < lam[i]; ++j) den *= (lam[i] - j - 1) + (lc[j] - i - 1) + 1;
    return num / den;
}

}  // namespace mira
