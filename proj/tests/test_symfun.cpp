#include <gtest/gtest.h>

#include "mira/symfun.hpp"

using namespace mira;

namespace {
Partition P(std::initializer_list<int> il) { return Partition(il); }
SymPoly M(int N, std::vector<std::pair<Partition, LaurentPoly>> terms) {
    SymPoly r{Basis::Monomial, N, {}};
    for (auto& [p, c] : terms) r.add(p, c);
    return r;
}
}  // namespace

TEST(SchurExpand, Examples) {
    EXPECT_EQ(schur_expand(P({2}), 2), M(2, {{P({2}), 1}, {P({1, 1}), 1}}));
    EXPECT_EQ(schur_expand(P({1, 1}), 2), M(2, {{P({1, 1}), 1}}));
    EXPECT_EQ(schur_expand(P({}), 3), M(3, {{P({}), 1}}));
    EXPECT_EQ(schur_expand(P({2, 1}), 3), M(3, {{P({2, 1}), 1}, {P({1, 1, 1}), 2}}));
}

TEST(HLExpand, Examples) {
    EXPECT_EQ(hl_expand(P({1, 1}), 2), M(2, {{P({1, 1}), 1}}));
    EXPECT_EQ(hl_expand(P({2}), 2), M(2, {{P({2}), 1}, {P({1, 1}), LaurentPoly(1) - LaurentPoly::v(-2)}}));
}

TEST(KostkaFoulkes, Examples) {
    EXPECT_EQ(kostka_foulkes(P({2}), P({1, 1}), 2), LaurentPoly::v(-2));
    EXPECT_EQ(kostka_foulkes(P({2}), P({2}), 2), LaurentPoly(1));
    EXPECT_EQ(kostka_foulkes(P({1, 1}), P({2}), 2), LaurentPoly());
    // K_{(3),(1,1,1)} = t^3, K_{(2,1),(1,1,1)} = t + t^2
    EXPECT_EQ(kostka_foulkes(P({3}), P({1, 1, 1}), 3), LaurentPoly::v(-6));
    EXPECT_EQ(kostka_foulkes(P({2, 1}), P({1, 1, 1}), 3), LaurentPoly::v(-2) + LaurentPoly::v(-4));
}

TEST(KostkaNumber, Examples) {
    EXPECT_EQ(kostka_number(P({2, 1}), P({1, 1, 1})), 2);
    EXPECT_EQ(kostka_number(P({3, 2}), P({2, 2, 1})), 2);
    EXPECT_EQ(kostka_number(P({2}), P({1, 1})), 1);
    EXPECT_EQ(kostka_number(P({1, 1}), P({2})), 0);
    for (int n = 1; n <= 6; ++n)
        for (auto& lam : partitions_of(n)) {
            std::vector<int> ones(n, 1);
            EXPECT_EQ(kostka_number(lam, Partition(ones)), hook_dim(lam)) << lam.str();
        }
}

TEST(SymPoly, RankTooSmall) {
    try {
        hl_expand(P({1, 1, 1}), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "RankTooSmall");
    }
    EXPECT_THROW(schur_expand(P({1, 1, 1}), 2), Error);
}

TEST(SymPoly, MixedBasisRefused) {
    SymPoly a = schur_expand(P({1}), 2);
    SymPoly b{Basis::Schur, 2, {}};
    b.add(P({1}), 1);
    try {
        (void)(a + b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "BasisMismatch");
    }
}

TEST(SymPoly, CostGuard) {
    try {
        hl_expand(P({1}), 7);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "CostGuard");
    }
}

// At t = 0 the Hall-Littlewood polynomial is the Schur polynomial.
TEST(HLExpand, TZeroIsSchur) {
    const int N = 5;
    for (int n = 0; n <= 5; ++n)
        for (auto& lam : partitions_of(n, -1, N)) {
            auto c = hl_schur_coeffs(lam, N);
            for (auto& [beta, poly] : c) {
                Int at0 = poly.eval(0);
                EXPECT_EQ(at0, beta == lam ? 1 : 0) << lam.str() << " " << beta.str();
            }
        }
}

TEST(HLExpand, UnitriangularInDominance) {
    for (int N = 1; N <= 4; ++N)
        for (int n = 0; n <= 5; ++n)
            for (auto& lam : partitions_of(n, -1, N)) {
                SymPoly p = hl_expand(lam, N);
                EXPECT_EQ(p.coeff(lam), LaurentPoly(1));
                for (auto& [mu, c] : p.coeffs) EXPECT_TRUE(dominates(lam, mu)) << lam.str() << " " << mu.str();
                SymPoly s = schur_expand(lam, N);
                EXPECT_EQ(s.coeff(lam), LaurentPoly(1));
                for (auto& [mu, c] : s.coeffs) EXPECT_TRUE(dominates(lam, mu));
            }
}

// Coefficients of P_lam in m_mu do not depend on N once N >= l(mu).
TEST(HLExpand, StableInN) {
    for (int n = 1; n <= 4; ++n)
        for (auto& lam : partitions_of(n, -1, 3)) {
            SymPoly small = hl_expand(lam, 3);
            for (int N = 4; N <= 6; ++N) {
                SymPoly big = hl_expand(lam, N);
                for (auto& [mu, c] : big.coeffs)
                    if (mu.length() <= 3) {
                        EXPECT_EQ(small.coeff(mu), c) << lam.str() << " N=" << N;
                    }
            }
        }
}

TEST(KostkaFoulkes, PositiveAndAtOneIsKostka) {
    const int N = 4;
    for (int n = 1; n <= 5; ++n)
        for (auto& lam : partitions_of(n, -1, N))
            for (auto& mu : partitions_of(n, -1, N)) {
                LaurentPoly k = kostka_foulkes(lam, mu, N);
                EXPECT_TRUE(k.nonneg_coeffs());
                Int at1 = 0;
                for (auto& [e, c] : k.terms()) at1 += c;
                EXPECT_EQ(at1, kostka_number(lam, mu)) << lam.str() << " " << mu.str();
            }
}

TEST(Convert, RoundTrip) {
    const int N = 3;
    SymPoly a{Basis::Monomial, N, {}};
    a.add(P({2, 1}), LaurentPoly::v(3) - 2);
    a.add(P({3}), LaurentPoly::v(-1));
    a.add(P({1, 1, 1}), 5);
    for (Basis b : {Basis::Schur, Basis::HallLittlewood}) {
        SymPoly c = convert(a, b);
        EXPECT_EQ(c.basis, b);
        EXPECT_EQ(convert(c, Basis::Monomial), a);
    }
}

TEST(MulMonomial, PowerSumSquare) {
    // m_1 * m_1 = m_2 + 2 m_11 in two variables
    SymPoly m1 = M(2, {{P({1}), 1}});
    EXPECT_EQ(mul_monomial(m1, m1), M(2, {{P({2}), 1}, {P({1, 1}), 2}}));
}
