#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "mira/ffcount.hpp"

using namespace mira;

namespace {
Partition P(std::initializer_list<int> il) { return Partition(il); }
Bipartition B(std::initializer_list<int> l, std::initializer_list<int> m) { return {Partition(l), Partition(m)}; }

FpMat jordan(const std::vector<int>& blocks) {
    int n = 0;
    for (int b : blocks) n += b;
    FpMat u(n, FpVec(n, 0));
    int off = 0;
    for (int b : blocks) {
        for (int a = 0; a + 1 < b; ++a) u[off + a + 1][off + a] = 1;
        off += b;
    }
    return u;
}
}  // namespace

TEST(JordanType, Examples) {
    FiniteField f(2);
    EXPECT_EQ(jordan_type(f, jordan({2, 1})), P({2, 1}));
    EXPECT_EQ(jordan_type(f, FpMat(3, FpVec(3, 0))), P({1, 1, 1}));
    EXPECT_EQ(jordan_type(f, jordan({3})), P({3}));
    try {
        jordan_type(f, identity(f, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "NotNilpotent");
    }
}

TEST(PairType, Examples) {
    // J2 with basis (w, uw): v = uw
    EXPECT_EQ(pair_type({2, jordan({2}), {0, 1}}), B({1}, {1}));
    EXPECT_EQ(pair_type({2, FpMat(2, FpVec(2, 0)), {1, 0}}), B({1, 1}, {}));
    EXPECT_EQ(pair_type({2, jordan({2}), {0, 0}}), B({}, {2}));
}

TEST(PairType, NormalFormsClassifyBack) {
    for (int q : {2, 3})
        for (int n = 0; n <= 5; ++n)
            for (auto& bp : bipartitions_of(n)) EXPECT_EQ(pair_type(normal_form_pair(bp, q)), bp);
}

TEST(PairType, ConjugationInvariant) {
    std::mt19937 rng(99);
    for (int q : {2, 3})
        for (int n = 1; n <= 4; ++n)
            for (auto& bp : bipartitions_of(n)) {
                auto p = normal_form_pair(bp, q);
                for (int t = 0; t < 50; ++t) {
                    auto g = random_gl(FiniteField(q), n, rng);
                    EXPECT_EQ(pair_type(conjugate_pair(p, g)), bp);
                }
            }
}

TEST(CountG, Examples) {
    EXPECT_EQ(count_G(Side::Left, P({1}), B({}, {1}), B({}, {1, 1}), 2), 3);
    EXPECT_EQ(count_G(Side::Left, P({1}), B({}, {1}), B({1}, {1}), 2), 1);
    EXPECT_EQ(count_G(Side::Left, P({1}), B({}, {1}), B({2}, {}), 2), 0);
    try {
        count_G(Side::Left, P({1}), B({}, {1}), B({2, 1}, {}), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "SizeMismatch");
    }
}

TEST(CountG, RightExamples) {
    // right action of u_(1) on u_(0,(1)): targets (0,(2)) once, (0,(1,1)) q+1 times
    EXPECT_EQ(count_G(Side::Right, P({1}), B({}, {1}), B({}, {2}), 3), 1);
    EXPECT_EQ(count_G(Side::Right, P({1}), B({}, {1}), B({}, {1, 1}), 3), 4);
    EXPECT_EQ(count_G(Side::Right, P({1}), B({}, {1}), B({1}, {1}), 3), 0);
}

TEST(CountG, IndependentOfRepresentative) {
    std::mt19937 rng(5);
    for (int q : {2, 3})
        for (int n = 1; n <= 4; ++n)
            for (auto& tgt : bipartitions_of(n))
                for (Side side : {Side::Left, Side::Right})
                    for (int k = 0; k <= n; ++k) {
                        auto rep = normal_form_pair(tgt, q);
                        auto other = conjugate_pair(rep, random_gl(FiniteField(q), n, rng));
                        EXPECT_EQ(tally_types(side, rep, k, n, n), tally_types(side, other, k, n, n));
                    }
}

TEST(CountG, InterpolatesIntegrally) {
    for (int n = 1; n <= 4; ++n)
        for (auto& tgt : bipartitions_of(n))
            for (Side side : {Side::Left, Side::Right})
                for (int k = 0; k <= n; ++k) {
                    auto polys = tally_polys(side, tgt, k, n, n);
                    for (auto& [key, p] : polys) EXPECT_LE(p.degree(), n * n);
                }
}

TEST(CountG, SumOverTypesIsAllInvariantSubspaces) {
    // every u-invariant line of F_q^2 with u = 0
    auto t = tally_types(Side::Left, B({}, {1, 1}), 1, 2, 2, 3);
    long long total = 0;
    for (auto& [k, c] : t) total += c;
    EXPECT_EQ(total, 4);
}

TEST(CountG, DeterministicUnderConcurrency) {
    std::vector<Bipartition> tgts = bipartitions_of(3);
    std::vector<TypeCounts> serial, par(tgts.size());
    for (auto& t : tgts) serial.push_back(tally_types(Side::Left, t, 1, 3, 3, 5));
    std::vector<std::thread> th;
    for (size_t i = 0; i < tgts.size(); ++i)
        th.emplace_back([&, i] { par[i] = tally_types(Side::Left, tgts[i], 1, 3, 3, 5); });
    for (auto& x : th) x.join();
    EXPECT_EQ(serial, par);
}

TEST(OrbitCensus, Examples) {
    EXPECT_EQ(enumerate_orbit_reps(2, 2).size(), 5u);
    EXPECT_EQ(enumerate_orbit_reps(1, 2).size(), 2u);
    EXPECT_EQ(enumerate_orbit_reps(0, 2).size(), 1u);
    try {
        enumerate_orbit_reps(5, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "CostGuard");
    }
}

TEST(OrbitCensus, MatchesBipartitionCount) {
    for (int q : {2, 3})
        for (int n = 0; n <= 3; ++n) {
            auto reps = enumerate_orbit_reps(n, q);
            EXPECT_EQ(reps.size(), bipartitions_of(n).size());
            std::set<Bipartition> labels;
            for (auto& r : reps) labels.insert(r.label);
            EXPECT_EQ(labels.size(), reps.size());
        }
}

TEST(AdmissibleFlags, Examples) {
    EXPECT_EQ(count_admissible_flags(2, 1, {2, jordan({2}), {0, 1}}), 1);
    EXPECT_EQ(count_admissible_flags(2, 1, {2, FpMat(2, FpVec(2, 0)), {0, 0}}), 3);
    EXPECT_EQ(count_admissible_flags(2, 2, {2, jordan({2}), {0, 1}}), 0);
    EXPECT_EQ(count_admissible_flags(2, 2, {3, FpMat(2, FpVec(2, 0)), {1, 2}}), 0);
}

TEST(AdmissibleFlags, ConjugationInvariant) {
    std::mt19937 rng(3);
    for (int q : {2, 3})
        for (int n = 1; n <= 3; ++n)
            for (auto& bp : bipartitions_of(n)) {
                auto p = normal_form_pair(bp, q);
                for (int m = 0; m <= n; ++m) {
                    long long c = count_admissible_flags(n, m, p);
                    for (int t = 0; t < 5; ++t)
                        EXPECT_EQ(count_admissible_flags(n, m, conjugate_pair(p, random_gl(FiniteField(q), n, rng))), c);
                }
            }
}

TEST(AdmissibleFlags, AllFlagsWhenUnconstrained) {
    // u = 0, v = 0: every complete flag of F_2^3, [3]_2! = 21
    EXPECT_EQ(count_admissible_flags(3, 0, {2, FpMat(3, FpVec(3, 0)), {0, 0, 0}}), 21);
}

TEST(FiniteField, AxiomsForPrimePowers) {
    for (int q : {2, 4, 8, 9, 16, 25, 27}) {
        FiniteField f(q);
        for (int a = 0; a < q; ++a) {
            EXPECT_EQ(f.add(a, f.neg(a)), 0);
            if (a) {
                EXPECT_EQ(f.mul(a, f.inv(a)), 1) << q << " " << a;
            }
            for (int b = 0; b < q; ++b) {
                EXPECT_EQ(f.mul(a, b), f.mul(b, a));
                for (int c = 0; c < q; c += 3)
                    EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }
    EXPECT_THROW(FiniteField(6), Error);
    EXPECT_THROW(FiniteField(1), Error);
}

TEST(CountG, PrimePowerFieldsFollowThePolynomial) {
    // lines in F_q^2 with u = 0: q + 1
    for (int q : {4, 8, 9}) {
        auto t = tally_types(Side::Left, B({}, {1, 1}), 1, 2, 2, q);
        long long total = 0;
        for (auto& [k, c] : t) total += c;
        EXPECT_EQ(total, q + 1);
    }
    EXPECT_EQ(count_G(Side::Left, P({1}), B({}, {1}), B({}, {1, 1}), 4), 5);
}
