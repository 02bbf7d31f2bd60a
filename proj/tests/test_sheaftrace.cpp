#include <gtest/gtest.h>

#include "mira/sheaftrace.hpp"

using namespace mira;

namespace {
Bipartition B(std::initializer_list<int> l, std::initializer_list<int> m) { return {Partition(l), Partition(m)}; }
const FqPoly t_minus_1_q2{1, 1};  // t + 1 = t - 1 over F_2

GreenLabel GL(int q, std::vector<std::pair<FqPoly, Bipartition>> s) {
    GreenLabel l{q, {}};
    for (auto& [f, b] : s) l.set(f, b);
    return l;
}
GreenAlgLabel GA(int q, std::vector<std::pair<FqPoly, Partition>> s) {
    GreenAlgLabel l{q, {}};
    for (auto& [f, p] : s) l.set(f, p);
    return l;
}
}  // namespace

TEST(Trace, Examples) {
    PiTable t = pi_table(2, 2);
    TraceCell c = trace_value(B({1}, {1}), B({}, {1, 1}), t, 2);
    EXPECT_EQ(c.a, QPoly::q() + QPoly(1));
    EXPECT_TRUE(c.b.is_zero());
    EXPECT_EQ(c.eval().first, 3);
    for (auto& x : t.order) EXPECT_EQ(trace_value(x, x, t, 2).a, QPoly(1));
    EXPECT_EQ(trace_value(B({2}, {}), B({}, {2}), t, 3).eval(), std::make_pair(Int(1), Int(0)));
    EXPECT_THROW(trace_value(B({3}, {}), B({}, {2}), t, 2), Error);
}

TEST(Trace, OpenStratumIsOne) {
    for (int n = 1; n <= 4; ++n) {
        PiTable t = pi_table(n, n);
        Bipartition open{Partition({n}), Partition()};
        for (auto& col : t.order) EXPECT_EQ(trace_value(col, open, t, 2).a, QPoly(col == open ? 1 : 0)) << col.str();
    }
}

TEST(Trace, CellsArePolynomialInSqrtQ) {
    for (int n = 1; n <= 4; ++n) {
        PiTable t = pi_table(n, n);
        for (auto& col : t.order)
            for (auto& row : t.order) EXPECT_NO_THROW(trace_value(col, row, t, 2));
    }
}

TEST(Fiber, Examples) {
    PiTable t = pi_table(2, 2);
    auto pair = normal_form_pair(B({}, {1, 1}), 2);
    EXPECT_EQ(count_admissible_flags(2, 1, pair), 3);
    auto rep = fiber_oracle_check(2, 2, t);
    EXPECT_EQ(rep.epsilon, (SqrtQ{1, 0}));
    bool seen = false;
    for (auto& c : rep.cells) {
        if (c.stratum == B({}, {1, 1}) && c.m == 1) {
            EXPECT_EQ(c.flags, 3);
            seen = true;
        }
        // nonzero v never lies in F_0 = 0
        if (c.m == 2 && !c.stratum.lam.empty()) {
            EXPECT_EQ(c.flags, 0);
        }
        if (c.stratum == B({2}, {}) && c.m == 0) {
            EXPECT_TRUE(c.ok);
        }
    }
    EXPECT_TRUE(seen);
    EXPECT_TRUE(rep.pass());
}

TEST(Fiber, AllStrataOneConstant) {
    SqrtQ eps = calibrate_fiber(pi_table(1, 1), 2);
    for (auto [n, q] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {3, 2}, {1, 3}, {2, 3}, {3, 3}, {4, 2}}) {
        auto rep = fiber_oracle_check(n, q, pi_table(n, n), eps);
        EXPECT_TRUE(rep.pass()) << n << " " << q;
        EXPECT_EQ(calibrate_fiber(pi_table(n, n), q), eps);
    }
    EXPECT_THROW(fiber_oracle_check(4, 3, pi_table(4, 4)), Error);
}

TEST(Green, Irreducibles) {
    EXPECT_EQ(irreducibles(2, 1).size(), 1u);
    EXPECT_EQ(irreducibles(2, 2).size(), 1u);  // t^2+t+1
    EXPECT_EQ(irreducibles(3, 1).size(), 2u);
    EXPECT_EQ(irreducibles(3, 2).size(), 3u);
    EXPECT_EQ(irreducibles(2, 3).size(), 2u);
    EXPECT_THROW(irreducibles(4, 1), Error);
}

TEST(Green, Examples) {
    GreenVec one{{GreenLabel::unit(2), Int(1)}};
    auto x = green_mul(Side::Left, GA(2, {{t_minus_1_q2, Partition({1})}}), one);
    GreenVec want{{GL(2, {{t_minus_1_q2, B({1}, {})}}), Int(1)}, {GL(2, {{t_minus_1_q2, B({}, {1})}}), Int(1)}};
    EXPECT_EQ(x, want);

    GreenVec y{{GL(2, {{t_minus_1_q2, B({1}, {1})}}), Int(3)}};
    EXPECT_EQ(green_mul(Side::Left, GA(2, {}), y), y);
    EXPECT_EQ(green_mul(Side::Right, GA(2, {}), y), y);

    // q+1 at a degree-1 factor becomes q^2+1 at a degree-2 factor
    FqPoly f2 = irreducibles(2, 2).at(0);
    auto check = [&](const FqPoly& f, int want_c) {
        GreenVec src{{GL(2, {{f, B({}, {1})}}), Int(1)}};
        auto r = green_mul(Side::Left, GA(2, {{f, Partition({1})}}), src);
        EXPECT_EQ(r[GL(2, {{f, B({}, {1, 1})}})], want_c);
    };
    check(t_minus_1_q2, 3);
    check(f2, 5);

    EXPECT_THROW(green_mul(Side::Left, GA(3, {{FqPoly{1, 1}, Partition({1})}}), one), Error);
}

TEST(Green, DegreeOneMatchesMirahall) {
    for (int q : {2, 3}) {
        FqPoly f{q - 1, 1};  // t - 1
        for (int n = 0; n <= 2; ++n)
            for (auto& src : bipartitions_of(n))
                for (int k = 1; k <= 2; ++k)
                    for (auto& nu : partitions_of(k))
                        for (Side side : {Side::Left, Side::Right}) {
                            GreenVec x{{GL(q, {{f, src}}), Int(1)}};
                            auto r = green_mul(side, GA(q, {{f, nu}}), x);
                            for (auto& tgt : bipartitions_of(n + k)) {
                                Int want = G_poly(side, nu, src, tgt).eval(q);
                                Int got = r.count(GL(q, {{f, tgt}})) ? r[GL(q, {{f, tgt}})] : Int(0);
                                EXPECT_EQ(got, want) << src.str() << " " << nu.str() << " " << tgt.str();
                            }
                        }
    }
}

TEST(Green, BimoduleAxioms) {
    for (int q : {2, 3}) {
        std::vector<GreenAlgLabel> alg;
        for (int k = 0; k <= 1; ++k)
            for (auto& a : green_alg_labels(k, q)) alg.push_back(a);
        std::vector<GreenLabel> mods;
        for (int k = 0; k <= 1; ++k)
            for (auto& m : green_labels(k, q)) mods.push_back(m);
        for (auto& a : alg)
            for (auto& b : alg)
                for (auto& m : mods) {
                    GreenVec x{{m, Int(1)}};
                    // (a x) b == a (x b)
                    EXPECT_EQ(green_mul(Side::Right, b, green_mul(Side::Left, a, x)),
                              green_mul(Side::Left, a, green_mul(Side::Right, b, x)));
                    // (a b) x == a (b x); x (a b) == (x a) b
                    EXPECT_EQ(green_mul(Side::Left, green_alg_mul(a, b), x),
                              green_mul(Side::Left, a, green_mul(Side::Left, b, x)));
                    EXPECT_EQ(green_mul(Side::Right, green_alg_mul(a, b), x),
                              green_mul(Side::Right, b, green_mul(Side::Right, a, x)));
                }
    }
}

TEST(Green, Freeness) {
    for (int q : {2, 3}) {
        auto r0 = green_freeness_check(0, q);
        EXPECT_EQ(r0.rows, 1);
        auto r1 = green_freeness_check(1, q);
        EXPECT_EQ(r1.rows, 2 * (q - 1));
        EXPECT_TRUE(r1.free());
        auto r2 = green_freeness_check(2, q);
        EXPECT_TRUE(r2.free()) << r2.rows << " " << r2.cols << " " << r2.rank;
    }
}
