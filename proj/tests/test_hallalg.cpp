#include <gtest/gtest.h>

#include "mira/hallalg.hpp"

using namespace mira;

namespace {
Partition P(std::initializer_list<int> il) { return Partition(il); }
HallElt H(int N, std::vector<std::pair<Partition, LaurentPoly>> terms) {
    HallElt r{N, {}};
    for (auto& [p, c] : terms) r.add(p, c);
    return r;
}
const LaurentPoly q = LaurentPoly::v(2);

std::vector<Partition> gens_upto(int n, int N) {
    std::vector<Partition> out;
    for (int k = 0; k <= n; ++k)
        for (auto& p : partitions_of(k, -1, N)) out.push_back(p);
    return out;
}
}  // namespace

TEST(HallMul, Examples) {
    for (int N = 2; N <= 3; ++N) {
        auto u1 = HallElt::u(P({1}), N);
        EXPECT_EQ(hall_mul(u1, u1), H(N, {{P({2}), 1}, {P({1, 1}), q + 1}}));
    }
    auto u1 = HallElt::u(P({1}), 1);
    EXPECT_EQ(hall_mul(u1, u1), H(1, {{P({2}), 1}}));
    HallElt a = H(3, {{P({2, 1}), LaurentPoly::v(-1)}, {P({1}), 3}});
    EXPECT_EQ(hall_mul(HallElt::u(P({}), 3), a), a);
    EXPECT_EQ(hall_mul(a, HallElt::u(P({}), 3)), a);
}

TEST(HallMul, RankMismatch) {
    try {
        hall_mul(HallElt::u(P({1}), 2), HallElt::u(P({1}), 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "RankMismatch");
    }
}

TEST(HallMul, KnownConstants) {
    // u_(1) u_(1,1) = u_(2,1) + (q^2+q+1) u_(1,1,1)
    auto r = hall_mul(HallElt::u(P({1}), 3), HallElt::u(P({1, 1}), 3));
    EXPECT_EQ(r, H(3, {{P({2, 1}), 1}, {P({1, 1, 1}), q * q + q + 1}}));
}

TEST(CExpand, Examples) {
    EXPECT_EQ(c_expand(P({1}), 2), H(2, {{P({1}), LaurentPoly::negv(-1)}}));
    EXPECT_EQ(c_expand(P({2}), 2), H(2, {{P({2}), LaurentPoly::v(-2)}, {P({1, 1}), LaurentPoly::v(-2)}}));
    EXPECT_EQ(c_expand(P({1, 1}), 2), H(2, {{P({1, 1}), 1}}));
    EXPECT_THROW(c_expand(P({1, 1, 1}), 2), Error);
}

TEST(Psi, Examples) {
    SymPoly e1{Basis::Monomial, 3, {}};
    e1.add(P({1}), 1);
    EXPECT_EQ(psi(HallElt::u(P({1}), 3)), e1);
    EXPECT_EQ(psi(HallElt::u(P({1, 1}), 2)), scale(hl_expand(P({1, 1}), 2), LaurentPoly::v(-2)));
    auto u1 = HallElt::u(P({1}), 3);
    EXPECT_EQ(psi(hall_mul(u1, u1)), mul_monomial(psi(u1), psi(u1)));
}

// u_(1^r) goes to v^{-r(r-1)} e_r
TEST(Psi, Elementary) {
    for (int N = 1; N <= 4; ++N)
        for (int r = 1; r <= N; ++r) {
            std::vector<int> ones(r, 1);
            SymPoly er{Basis::Monomial, N, {}};
            er.add(Partition(ones), LaurentPoly::v(-r * (r - 1)));
            EXPECT_EQ(psi(HallElt::u(Partition(ones), N)), er);
        }
}

TEST(HallMul, CommutativeAndAssociative) {
    const int N = 4;
    auto gens = gens_upto(5, N);
    for (auto& a : gens)
        for (auto& b : gens) {
            if (a.size() + b.size() > 5) continue;
            auto ua = HallElt::u(a, N), ub = HallElt::u(b, N);
            auto ab = hall_mul(ua, ub);
            EXPECT_EQ(ab, hall_mul(ub, ua)) << a.str() << " " << b.str();
            for (auto& c : gens) {
                if (a.size() + b.size() + c.size() > 5 || a.empty() || b.empty() || c.empty()) continue;
                auto uc = HallElt::u(c, N);
                EXPECT_EQ(hall_mul(ab, uc), hall_mul(ua, hall_mul(ub, uc))) << a.str() << b.str() << c.str();
            }
        }
}

TEST(Psi, Multiplicative) {
    const int N = 4;
    auto gens = gens_upto(3, N);
    for (auto& a : gens)
        for (auto& b : gens) {
            auto ua = HallElt::u(a, N), ub = HallElt::u(b, N);
            EXPECT_EQ(psi(hall_mul(ua, ub)), mul_monomial(psi(ua), psi(ub))) << a.str() << " " << b.str();
        }
}

TEST(CExpand, PsiIsSchur) {
    const int N = 3;
    for (int n = 0; n <= 4; ++n)
        for (auto& lam : partitions_of(n, -1, N))
            EXPECT_EQ(psi(c_expand(lam, N)), scale(schur_expand(lam, N), LaurentPoly::negv(-(N - 1) * n)));
}

TEST(CExpand, UnitriangularAndRoundTrip) {
    const int N = 4;
    for (int n = 0; n <= 5; ++n)
        for (auto& lam : partitions_of(n, -1, N)) {
            auto c = c_expand(lam, N);
            EXPECT_TRUE(c.coeff(lam).is_unit());
            for (auto& [mu, x] : c.coeffs) EXPECT_TRUE(dominates(lam, mu));
            auto u = HallElt::u(lam, N);
            EXPECT_EQ(from_c_basis(to_c_basis(u), N), u);
            auto cc = to_c_basis(c);
            ASSERT_EQ(cc.size(), 1u);
            EXPECT_EQ(cc.begin()->second, LaurentPoly(1));
        }
}
