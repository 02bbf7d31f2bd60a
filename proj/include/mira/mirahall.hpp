#pragma once

// Mirabolic Hall bimodule over the Hall algebra: actions by brute-force
// counts, the closed-form Pieri rule for u_(1^r), the elements c_(lam,mu),
// Pi tables and mirabolic Hall-Littlewood polynomials.

#include <map>
#include <optional>
#include <set>

#include "mira/hallalg.hpp"

namespace mira {

struct MirElt {
    int rank = 0;
    std::map<Bipartition, LaurentPoly> coeffs;

    static MirElt u(const Bipartition& bp, int N) {
        if (bp.length() > N) fail("RankTooSmall", bp.str() + " needs rank " + std::to_string(bp.length()));
        MirElt r{N, {}};
        r.coeffs[bp] = 1;
        return r;
    }
    void add(const Bipartition& b, const LaurentPoly& c) {
        if (c.is_zero()) return;
        auto& slot = coeffs[b];
        slot += c;
        if (slot.is_zero()) coeffs.erase(b);
    }
    LaurentPoly coeff(const Bipartition& b) const {
        auto it = coeffs.find(b);
        return it == coeffs.end() ? LaurentPoly() : it->second;
    }
    friend bool operator==(const MirElt& a, const MirElt& b) { return a.rank == b.rank && a.coeffs == b.coeffs; }
};

inline MirElt operator+(MirElt a, const MirElt& b) {
    require_rank(a.rank, b.rank);
    for (auto& [x, c] : b.coeffs) a.add(x, c);
    return a;
}
inline MirElt operator-(MirElt a, const MirElt& b) {
    require_rank(a.rank, b.rank);
    for (auto& [x, c] : b.coeffs) a.add(x, -c);
    return a;
}
inline MirElt scale(const MirElt& a, const LaurentPoly& c) {
    MirElt r{a.rank, {}};
    for (auto& [x, y] : a.coeffs) r.add(x, y * c);
    return r;
}

inline Partition ones(int r) { return Partition(std::vector<int>(std::max(r, 0), 1)); }

inline MirElt act(Side side, const HallElt& a, const MirElt& m) {
    require_rank(a.rank, m.rank);
    int N = a.rank;
    MirElt r{N, {}};
    for (auto& [nu, ca] : a.coeffs)
        for (auto& [src, cm] : m.coeffs) {
            LaurentPoly c = ca * cm;
            for (auto& tgt : bipartitions_of(nu.size() + src.size(), N)) {
                QPoly g = G_poly(side, nu, src, tgt);
                if (!g.is_zero()) r.add(tgt, c * g.to_laurent());
            }
        }
    return r;
}

// ---- closed form for the left action of u_(1^r) ---------------------------

struct ClosedBucket {
    std::vector<int> rho;  // rho_1..rho_{nu_1}
    int j = -1;            // -1 when lam is empty (no position)
    QPoly count;
    std::optional<Bipartition> label;
};

namespace detail {
// conjugate of a weakly decreasing nonnegative sequence, or none
inline std::optional<Partition> conj_seq(const std::vector<int>& s) {
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0) return std::nullopt;
        if (i + 1 < s.size() && s[i] < s[i + 1]) return std::nullopt;
    }
    return conjugate(Partition(s));
}
}  // namespace detail

// All (rho, j) buckets for a target: W <= Ker u of dimension r is sorted by
// its position rho against the flag F_k = Ker u cap Im u^k and by the last j
// with u^{lam_1-1} v in W + F_j.
inline std::vector<ClosedBucket> closed_form_buckets(const Bipartition& tgt, int r) {
    std::vector<ClosedBucket> out;
    Partition nu = tgt.nu();
    Partition nut = conjugate(nu);
    int nu1 = nu.first();
    auto nt = [&](int k) { return k >= 1 ? nut[k - 1] : 0; };
    auto th = upsilon(tgt).second;
    Partition tht = conjugate(th);
    std::vector<int> a(nu1);
    for (int k = 1; k <= nu1; ++k) a[k - 1] = nt(k) - nt(k + 1);
    auto qp = [&](int e) { return QPoly::q(e); };

    int L = tgt.length();
    int istar = 0;
    for (int i = 0; i < L; ++i)
        if (tgt.lam[i] == tgt.lam[0]) istar = i;
    int k0 = nu[istar] - 1;

    std::vector<int> rho(nu1, 0);
    auto visit = [&]() {
        auto R = [&](int k) {
            int s = 0;
            for (int m = k + 1; m <= nu1; ++m) s += rho[m - 1];
            return s;
        };
        QPoly Prho = 1;
        for (int k = 1; k <= nu1; ++k) Prho *= gauss_binom(a[k - 1], rho[k - 1]) * qp(rho[k - 1] * (nt(k + 1) - R(k)));
        std::vector<int> nutp(nu1);
        for (int k = 1; k <= nu1; ++k) nutp[k - 1] = nt(k) - rho[k - 1];
        Partition nup = *detail::conj_seq(nutp);
        if (tgt.lam.empty()) {
            out.push_back({rho, -1, Prho, Bipartition{Partition(), nup}});
            return;
        }
        auto dint = [&](int i, int l) {
            if (i <= l) return nt(l + 1);
            int s = nt(i + 1);
            for (int m = l + 1; m <= std::min(i, nu1); ++m) s += rho[m - 1];
            return s;
        };
        QPoly den = qp(nt(k0 + 1)) - qp(nt(k0 + 2));
        for (int j = 0; j <= nu1; ++j) {
            QPoly PA = qp(dint(j, k0)) - qp(dint(j, k0 + 1));
            if (j < nu1) PA += qp(dint(j + 1, k0 + 1)) - qp(dint(j + 1, k0));
            QPoly num = Prho * PA;
            if (num.is_zero()) continue;
            QPoly P;
            try {
                P = num.divexact(den);
            } catch (const Error&) {
                fail("EdgeConventionMismatch", "non-polynomial bucket count at " + tgt.str());
            }
            std::vector<int> tp(nu1 + 1);
            for (int k = 1; k <= nu1 + 1; ++k)
                tp[k - 1] = tht[k - 1] - (k <= nu1 ? rho[k - 1] : 0) + (k == k0 + 1) - (k == j + 1 && j < nu1);
            // removed boxes slide to the nearest legal column
            std::sort(tp.rbegin(), tp.rend());
            std::optional<Bipartition> label;
            if (auto thp = detail::conj_seq(tp)) {
                try {
                    label = xi(nup, *thp);
                } catch (const Error&) {
                }
            }
            out.push_back({rho, j, P, label});
        }
    };
    auto rec = [&](auto&& self, int k, int rem) -> void {
        if (k == nu1) {
            if (rem == 0) visit();
            return;
        }
        for (int x = 0; x <= std::min(a[k], rem); ++x) {
            rho[k] = x;
            self(self, k + 1, rem - x);
        }
        rho[k] = 0;
    };
    rec(rec, 0, r);
    return out;
}

// Left constants G^{tgt}_{(1^r), src} for targets with at most N rows.
inline std::map<Bipartition, QPoly> closed_form_G(int r, const Bipartition& src, int N) {
    if (r < 1) fail("SizeMismatch", "r must be positive");
    std::map<Bipartition, QPoly> out;
    for (auto& tgt : bipartitions_of(src.size() + r, N))
        for (auto& b : closed_form_buckets(tgt, r))
            if (b.label && *b.label == src) {
                auto& slot = out[tgt];
                slot += b.count;
                if (slot.is_zero()) out.erase(tgt);
            }
    return out;
}

// Brute-force census of the same buckets at one field size: for every r-dim
// W <= Ker u, its (rho, j) and the type of the quotient pair.
using BucketKey = std::pair<std::vector<int>, int>;
inline std::map<BucketKey, std::map<Bipartition, long long>> bucket_census(const Bipartition& tgt, int r, int q) {
    FiniteField f(q);
    auto nf = normal_form(f, tgt);
    int n = nf.n;
    std::map<BucketKey, std::map<Bipartition, long long>> out;
    if (n == 0) return out;
    int nu1 = tgt.nu().first();
    auto imgs = image_powers(f, nf.u);
    FpMat K = kernel(f, nf.u, n);
    std::vector<FpMat> F(nu1 + 2);
    for (int k = 0; k <= nu1 + 1; ++k) {
        // Ker u cap Im u^k: in the normal form, socles of blocks longer than k
        FpMat Ik = k < int(imgs.size()) ? imgs[k] : FpMat{};
        int dk = rank(f, K), di = rank(f, Ik), ds = rank(f, concat<FiniteField>(K, Ik));
        FpMat both;
        // intersection via kernel of [K ; -Ik] coefficients
        if (!Ik.empty() && dk + di > ds) {
            int nk = int(K.size()), ni = int(Ik.size());
            FpMat T(n, FpVec(nk + ni, 0));
            for (int r2 = 0; r2 < n; ++r2) {
                for (int i = 0; i < nk; ++i) T[r2][i] = K[i][r2];
                for (int i = 0; i < ni; ++i) T[r2][nk + i] = f.neg(Ik[i][r2]);
            }
            for (auto& c : kernel(f, T, nk + ni)) {
                FpVec x(n, 0);
                for (int i = 0; i < nk; ++i)
                    for (int r2 = 0; r2 < n; ++r2) x[r2] = f.add(x[r2], f.mul(c[i], K[i][r2]));
                both.push_back(x);
            }
            both = row_basis(f, both);
        }
        F[k] = both;
    }
    FpMat cv = cyclic_span(f, nf.u, FpMat{nf.v});
    FpVec vp = nf.v;
    for (int e = 0; e + 1 < tgt.lam.first(); ++e) vp = apply(f, nf.u, vp);
    detail::for_each_invariant_subspace(f, nf.u, FpMat{}, K, r, [&](const FpMat& W) {
        std::vector<int> wf(nu1 + 1);
        for (int k = 0; k <= nu1; ++k)
            wf[k] = int(W.size()) + rank(f, F[k]) - rank(f, concat<FiniteField>(W, F[k]));
        std::vector<int> rho(nu1);
        for (int k = 1; k <= nu1; ++k) rho[k - 1] = wf[k - 1] - wf[k];
        int j = -1;
        if (!tgt.lam.empty())
            for (int jj = 0; jj <= nu1; ++jj) {
                FpMat a = concat<FiniteField>(W, F[jj]);
                int ra = rank(f, a);
                a.push_back(vp);
                if (rank(f, a) == ra) j = jj;
            }
        Partition qn = quotient_type(f, imgs, W);
        Partition qt = quotient_type(f, imgs, concat<FiniteField>(W, cv));
        ++out[{rho, j}][xi(qn, qt)];
    });
    return out;
}

// ---- stabilization and the duality ----------------------------------------

// Pairs of weakly decreasing integer N-tuples (lam, mu).
struct SignedPair {
    std::vector<int> lam, mu;
};

inline SignedPair to_signed(const Bipartition& b, int N) {
    return {to_signature(b.lam, N).e, to_signature(b.mu, N).e};
}
inline std::vector<int> star_vec(const std::vector<int>& e) {
    std::vector<int> r(e.rbegin(), e.rend());
    for (auto& x : r) x = -x;
    return r;
}
inline Bipartition shifted(const SignedPair& s, int i, int j) {
    std::vector<int> l = s.lam, m = s.mu;
    for (auto& x : l) x += i;
    for (auto& x : m) x += j;
    for (int x : l)
        if (x < 0) fail("NotAPartition", "negative entry after shift");
    for (int x : m)
        if (x < 0) fail("NotAPartition", "negative entry after shift");
    return {Partition(l), Partition(m)};
}

// Constants in the stable range: lam-entries shifted to be >= 1 and
// mu-entries to be >= 0 on source and target together. Below that range
// (some lam-entry 0) finite counts differ, e.g. the right u_(1) constant
// (empty,(1)) -> (empty,(1,1)) is q+1 unshifted and q once lam >= 1^N.
inline QPoly stable_G(Side side, const Partition& gen, const SignedPair& src, const SignedPair& tgt, int extra = 0) {
    auto lowest = [](const std::vector<int>& a, const std::vector<int>& b) {
        int m = a.empty() ? 0 : a[0];
        for (int x : a) m = std::min(m, x);
        for (int x : b) m = std::min(m, x);
        return m;
    };
    int i = std::max(0, 1 - lowest(src.lam, tgt.lam)) + extra;
    int j = std::max(0, -lowest(src.mu, tgt.mu)) + extra;
    return G_poly(side, gen, shifted(src, i, j), shifted(tgt, i, j));
}

// Duality: G^{(lam,mu)}_{(lam',mu'),(1^r)} = G^{(mu*+1^N, lam*)}_{(1^{N-r}),(mu'*, lam'*)},
// both sides in the stable range. Returns the targets that disagree.
inline std::vector<Bipartition> rho_mismatches(const Bipartition& src, int r, int N) {
    if (r < 1 || r > N - 1) fail("SizeMismatch", "r must lie in 1..N-1");
    std::vector<Bipartition> bad;
    SignedPair s = to_signed(src, N);
    SignedPair ds{star_vec(s.mu), star_vec(s.lam)};
    for (auto& tgt : bipartitions_of(src.size() + r, N)) {
        SignedPair t = to_signed(tgt, N);
        SignedPair dt{star_vec(t.mu), star_vec(t.lam)};
        for (auto& x : dt.lam) x += 1;
        QPoly lhs = stable_G(Side::Right, ones(r), s, t);
        QPoly rhs = stable_G(Side::Left, ones(N - r), ds, dt);
        if (lhs != rhs) bad.push_back(tgt);
    }
    return bad;
}

inline bool rho_check(const Bipartition& src, int r, int N) { return rho_mismatches(src, r, N).empty(); }

// ---- c-elements and Pi tables ------------------------------------------------

inline MirElt c_bipartition(const Partition& lam, const Partition& mu, int N) {
    check_rank(lam, N);
    check_rank(mu, N);
    MirElt unit = MirElt::u(Bipartition{}, N);
    return act(Side::Left, c_expand(lam, N), act(Side::Right, c_expand(mu, N), unit));
}

struct PiTable {
    int n = 0, N = 0;
    std::vector<Bipartition> order;  // AH order, maximal first
    std::map<std::pair<Bipartition, Bipartition>, LaurentPoly> raw, calibrated;  // (row, col)
    std::map<Bipartition, LaurentPoly> diag_units;
};

inline PiTable pi_table(int n, int N) {
    if (n < 0) fail("SizeMismatch", "n must be >= 0");
    if (N < n) fail("RankTooSmall", "pi_table needs N >= n");
    PiTable t;
    t.n = n;
    t.N = N;
    t.order = bipartitions_of(n, N);
    for (auto& col : t.order) {
        MirElt c = c_bipartition(col.lam, col.mu, N);
        auto hcoef = [&](const Bipartition& x) { return c.coeff(x) * LaurentPoly::negv(stats(x, N).ell); };
        LaurentPoly d = hcoef(col);
        if (!d.is_unit()) fail("DiagonalNotUnit", col.str() + ": " + d.str());
        t.diag_units[col] = d;
        for (auto& [row, x] : c.coeffs) {
            LaurentPoly raw = hcoef(row).div_unit(d);
            t.raw[{row, col}] = raw;
            int sgn = b_stat(row) - b_stat(col);
            t.calibrated[{row, col}] = (sgn % 2 == 0) ? raw : -raw;
        }
    }
    return t;
}

inline LaurentPoly pi_entry(const PiTable& t, const Bipartition& row, const Bipartition& col, bool calibrated = true) {
    auto& m = calibrated ? t.calibrated : t.raw;
    auto it = m.find({row, col});
    return it == m.end() ? LaurentPoly() : it->second;
}

// ---- mirabolic Hall-Littlewood polynomials ---------------------------------

// Psi(u_bp) in s (x) s, with the prefactor (-v)^{b(bp)} returned separately.
inline std::pair<TensorSym, LaurentPoly> mhl_poly(const Bipartition& bp, int N) {
    if (bp.length() > N) fail("RankTooSmall", bp.str());
    auto order = bipartitions_of(bp.size(), N);
    MirElt rem = MirElt::u(bp, N);
    TensorSym out{Basis::Schur, N, {}};
    for (auto& x : order) {
        LaurentPoly c = rem.coeff(x);
        if (c.is_zero()) continue;
        MirElt cx = c_bipartition(x.lam, x.mu, N);
        LaurentPoly d = cx.coeff(x);
        if (!d.is_unit()) fail("DiagonalNotUnit", x.str());
        LaurentPoly a = c.div_unit(d);
        rem = rem - scale(cx, a);
        out.add(x.lam, x.mu, a * LaurentPoly::negv(-(N - 1) * x.size()));
    }
    if (!rem.coeffs.empty()) fail("NotUnitriangular", bp.str());
    return {out, LaurentPoly::negv(b_stat(bp))};
}

}  // namespace mira
