#pragma once

// Hall algebra of finite k[[t]]-modules with at most N Jordan blocks.
// Structure constants are brute-force submodule counts, interpolated in q.

#include <map>
#include <mutex>

#include "mira/ffcount.hpp"
#include "mira/symfun.hpp"

namespace mira {

struct HallElt {
    int rank = 0;
    std::map<Partition, LaurentPoly> coeffs;

    static HallElt u(const Partition& lam, int N) {
        check_rank(lam, N);
        HallElt r{N, {}};
        r.coeffs[lam] = 1;
        return r;
    }
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
    friend bool operator==(const HallElt& a, const HallElt& b) { return a.rank == b.rank && a.coeffs == b.coeffs; }
};

inline void require_rank(int a, int b) {
    if (a != b) fail("RankMismatch", std::to_string(a) + " vs " + std::to_string(b));
}

inline HallElt operator+(HallElt a, const HallElt& b) {
    require_rank(a.rank, b.rank);
    for (auto& [p, c] : b.coeffs) a.add(p, c);
    return a;
}
inline HallElt operator-(HallElt a, const HallElt& b) {
    require_rank(a.rank, b.rank);
    for (auto& [p, c] : b.coeffs) a.add(p, -c);
    return a;
}
inline HallElt scale(const HallElt& a, const LaurentPoly& c) {
    HallElt r{a.rank, {}};
    for (auto& [p, x] : a.coeffs) r.add(p, x * c);
    return r;
}

// G^lam_{mu,nu}: submodules of type nu with quotient of type mu in a module of
// type lam. With v = 0 this is the left mirabolic count on (empty, .) labels.
inline QPoly hall_const(const Partition& lam, const Partition& mu, const Partition& nu) {
    if (lam.size() != mu.size() + nu.size()) return QPoly();
    Partition e;
    return G_poly(Side::Left, nu, Bipartition{e, mu}, Bipartition{e, lam});
}

inline HallElt hall_mul(const HallElt& a, const HallElt& b) {
    require_rank(a.rank, b.rank);
    int N = a.rank;
    HallElt r{N, {}};
    for (auto& [mu, ca] : a.coeffs)
        for (auto& [nu, cb] : b.coeffs) {
            LaurentPoly c = ca * cb;
            for (auto& lam : partitions_of(mu.size() + nu.size(), -1, N)) {
                QPoly g = hall_const(lam, mu, nu);
                if (!g.is_zero()) r.add(lam, c * g.to_laurent());
            }
        }
    return r;
}

inline HallElt c_expand(const Partition& lam, int N) {
    check_rank(lam, N);
    HallElt r{N, {}};
    LaurentPoly pre = LaurentPoly::negv(-(N - 1) * lam.size());
    for (auto& mu : partitions_of(lam.size(), -1, N)) {
        LaurentPoly k = kostka_foulkes(lam, mu, N);
        if (!k.is_zero()) r.add(mu, pre * LaurentPoly::v(2 * n_stat(mu)) * k);
    }
    return r;
}

// Coordinates of a in the c-basis, by peeling dominance-maximal terms.
inline std::map<Partition, LaurentPoly> to_c_basis(HallElt a) {
    std::map<Partition, LaurentPoly> out;
    while (!a.coeffs.empty()) {
        auto it = std::prev(a.coeffs.end());
        Partition lam = it->first;
        LaurentPoly c = it->second;
        HallElt cl = c_expand(lam, a.rank);
        LaurentPoly d = cl.coeff(lam);
        if (!d.is_unit()) fail("NotUnitriangular", lam.str());
        LaurentPoly x = c.div_unit(d);
        out[lam] = x;
        a = a - scale(cl, x);
    }
    return out;
}

inline HallElt from_c_basis(const std::map<Partition, LaurentPoly>& cc, int N) {
    HallElt r{N, {}};
    for (auto& [lam, c] : cc) r = r + scale(c_expand(lam, N), c);
    return r;
}

// Psi(u_lam) = v^{-2n(lam)} P_lam(X; v^{-2}), in the monomial basis.
inline SymPoly psi(const HallElt& a) {
    SymPoly r{Basis::Monomial, a.rank, {}};
    for (auto& [lam, c] : a.coeffs) r = r + scale(hl_expand(lam, a.rank), c * LaurentPoly::v(-2 * n_stat(lam)));
    return r;
}

}  // namespace mira
