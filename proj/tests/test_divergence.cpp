#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hdi/divergence.hpp"
#include "oracle_support.hpp"

using namespace hdi;

namespace {

MassFunction mf(std::initializer_list<double> v) { return MassFunction(std::vector<double>(v)); }

MassFunction mf(const std::vector<double>& v) { return MassFunction(v); }

const std::vector<double> kBaseRates = {0.5, 0.4, 0.3, 0.1};
const std::vector<double> kQuarter = {0.25, 0.25, 0.25, 0.25};

}  // namespace

TEST_CASE("frozen baseline constants match the direct-formula oracles") {
    const auto sizes = oracle::equal_sizes(4);
    const auto rates = oracle::baseline_rates();
    CHECK(std::abs(static_cast<double>(oracle::mld(sizes, rates)) - oracle::kBaselineMld) < 1e-15);
    CHECK(std::abs(static_cast<double>(oracle::ti(sizes, rates)) - oracle::kBaselineTi) < 1e-15);
    CHECK(std::abs(static_cast<double>(oracle::sti(sizes, rates)) - oracle::kBaselineSti) < 1e-15);
    CHECK(std::abs(-std::expm1(-static_cast<double>(oracle::mld(sizes, rates))) -
                   oracle::kBaselineAtkinson1) < 1e-15);
    CHECK(std::abs(-std::expm1(-static_cast<double>(oracle::sti(sizes, rates))) -
                   oracle::kBaselineSsri1) < 1e-15);
}

TEST_CASE("renyi divergence basics") {
    SECTION("identity: q = c*p gives zero") {
        const MassFunction p = mf({1, 1, 1, 1});
        CHECK(renyi_divergence(p, p, {0.7}) == Catch::Approx(0.0).margin(1e-14));
        const MassFunction q = mf({3, 3, 3, 3});
        CHECK(renyi_divergence(p, q, {2.0}) == Catch::Approx(0.0).margin(1e-14));
    }

    SECTION("alpha = 1 limit reproduces the baseline MLD") {
        const double v = renyi_divergence(mf(kQuarter), mf(kBaseRates), {1.0});
        CHECK(std::abs(v - oracle::kBaselineMld) < 1e-14);
    }

    SECTION("alpha = 0 limit reproduces the baseline TI") {
        const double v = renyi_divergence(mf(kQuarter), mf(kBaseRates), {0.0});
        CHECK(std::abs(v - oracle::kBaselineTi) < 1e-14);
    }

    SECTION("scale invariance in both arguments") {
        oracle::Gen gen(42);
        for (int it = 0; it < 200; ++it) {
            const auto p = gen.masses(5);
            const auto q = gen.masses(5);
            std::vector<double> p2(p), q3(q);
            for (double& x : p2) x *= 2.0;
            for (double& x : q3) x *= 3.0;
            const double a = gen.uniform(-3.0, 4.0);
            const double v1 = renyi_divergence(mf(p), mf(q), {a});
            const double v2 = renyi_divergence(mf(p2), mf(q3), {a});
            REQUIRE(std::abs(v1 - v2) <= 1e-12 * (1.0 + std::abs(v1)));
        }
    }

    SECTION("matches the plain-power oracle away from the poles") {
        oracle::Gen gen(7);
        for (int it = 0; it < 200; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            for (double a : {-2.0, -0.5, 0.3, 0.5, 0.7, 2.0, 5.0}) {
                const double got = renyi_divergence(mf(p), mf(q), {a});
                const double want =
                    static_cast<double>(oracle::renyi(gen.to_ld(p), gen.to_ld(q), a));
                REQUIRE(std::abs(got - want) <= 1e-11 * (1.0 + std::abs(want)));
            }
        }
    }

    SECTION("skew-symmetry: R_a(q||p) = R_{1-a}(p||q)") {
        oracle::Gen gen(11);
        for (int it = 0; it < 200; ++it) {
            const auto p = gen.masses(6);
            const auto q = gen.masses(6);
            for (double a : {-2.0, -0.5, 0.3, 0.5, 2.0, 5.0}) {
                const double lhs = renyi_divergence(mf(q), mf(p), {a});
                const double rhs = renyi_divergence(mf(p), mf(q), {1.0 - a});
                REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
            }
        }
    }

    SECTION("nonnegative for every alpha, zero only at proportional inputs") {
        oracle::Gen gen(13);
        for (int it = 0; it < 300; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            const double a = gen.uniform(-4.0, 5.0);
            const double v = renyi_divergence(mf(p), mf(q), {a});
            REQUIRE(v >= -1e-12);
        }
    }

    SECTION("alpha * R_alpha is nondecreasing in alpha > 0") {
        oracle::Gen gen(17);
        const std::vector<double> grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(5);
            const auto q = gen.masses(5);
            double prev = -1.0;
            for (double a : grid) {
                const double v = a * renyi_divergence(mf(p), mf(q), {a});
                REQUIRE(v >= prev - 1e-10 * (1.0 + std::abs(v)));
                prev = v;
            }
        }
    }

    SECTION("limit continuity just outside the limit-branch band") {
        oracle::Gen gen(19);
        for (int it = 0; it < 50; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            const double r1 = renyi_divergence(mf(p), mf(q), {1.0});
            const double r0 = renyi_divergence(mf(p), mf(q), {0.0});
            for (double eps : {2e-6, 1e-5}) {
                CHECK(std::abs(renyi_divergence(mf(p), mf(q), {1.0 + eps}) - r1) <=
                      1e-5 * (1.0 + std::abs(r1)));
                CHECK(std::abs(renyi_divergence(mf(p), mf(q), {1.0 - eps}) - r1) <=
                      1e-5 * (1.0 + std::abs(r1)));
                CHECK(std::abs(renyi_divergence(mf(p), mf(q), {eps}) - r0) <=
                      1e-5 * (1.0 + std::abs(r0)));
                CHECK(std::abs(renyi_divergence(mf(p), mf(q), {-eps}) - r0) <=
                      1e-5 * (1.0 + std::abs(r0)));
            }
        }
    }

    SECTION("large aversion values stay finite") {
        const double v = renyi_divergence(mf(kQuarter), mf(kBaseRates), {128.0});
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
        CHECK(std::isfinite(renyi_divergence(mf(kQuarter), mf(kBaseRates), {-128.0})));
    }

    SECTION("errors") {
        CHECK_THROWS_AS(renyi_divergence(mf({1, 2}), mf({1, 2, 3}), {2.0}),
                        DimensionMismatchError);
        // zero q-mass needs a negative power when alpha > 1
        CHECK_THROWS_AS(renyi_divergence(mf({1, 1}), mf({1, 0}), {2.0}), ZeroMassGroupError);
        // but drops out when alpha < 1
        CHECK(std::isfinite(renyi_divergence(mf({1, 1}), mf({1, 0}), {0.5})));
        CHECK_THROWS_AS(renyi_divergence(mf({1, 1}), mf({1, 0}), {1.0}), ZeroMassGroupError);
    }
}

TEST_CASE("symmetrized renyi index") {
    SECTION("symmetric about alpha = 1/2") {
        oracle::Gen gen(23);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            CHECK(symmetrized_renyi(mf(p), mf(q), {0.3}) ==
                  symmetrized_renyi(mf(p), mf(q), {0.7}));
            CHECK(symmetrized_renyi(mf(p), mf(q), {2.0}) ==
                  symmetrized_renyi(mf(p), mf(q), {-1.0}));
        }
    }

    SECTION("symmetric in the distributions") {
        oracle::Gen gen(29);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(5);
            const auto q = gen.masses(5);
            const double a = gen.uniform(-2.0, 3.0);
            REQUIRE(std::abs(symmetrized_renyi(mf(p), mf(q), {a}) -
                             symmetrized_renyi(mf(q), mf(p), {a})) <= 1e-12);
        }
    }

    SECTION("value at alpha = 1 equals value at alpha = 0 (STI)") {
        const double v1 = symmetrized_renyi(mf(kQuarter), mf(kBaseRates), {1.0});
        const double v0 = symmetrized_renyi(mf(kQuarter), mf(kBaseRates), {0.0});
        CHECK(v1 == v0);
        CHECK(std::abs(v1 - oracle::kBaselineSti) < 1e-14);
    }

    SECTION("SR_1 = (R_1 + R_0)/2 exactly") {
        oracle::Gen gen(31);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            const double lhs = symmetrized_renyi(mf(p), mf(q), {1.0});
            const double rhs = 0.5 * (renyi_divergence(mf(p), mf(q), {1.0}) +
                                      renyi_divergence(mf(p), mf(q), {0.0}));
            REQUIRE(std::abs(lhs - rhs) <= 1e-12);
        }
    }

    SECTION("agrees with averaging the two directed divergences") {
        oracle::Gen gen(37);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            const double a = gen.uniform(0.05, 3.0);
            const double lhs = symmetrized_renyi(mf(p), mf(q), {a});
            const double rhs = 0.5 * (renyi_divergence(mf(p), mf(q), {a}) +
                                      renyi_divergence(mf(p), mf(q), {1.0 - a}));
            REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("atkinson index") {
    SECTION("zero at proportional inputs") {
        const MassFunction p = mf({2, 1, 1});
        const MassFunction q = mf({4, 2, 2});
        CHECK(atkinson_index(p, q, {1.0}) == Catch::Approx(0.0).margin(1e-14));
    }

    SECTION("baseline value at alpha = 1") {
        const double v = atkinson_index(mf(kQuarter), mf(kBaseRates), {1.0});
        CHECK(std::abs(v - oracle::kBaselineAtkinson1) < 1e-14);
    }

    SECTION("always in [0, 1)") {
        oracle::Gen gen(41);
        for (int it = 0; it < 200; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            const double v = atkinson_index(mf(p), mf(q), {2.0});
            REQUIRE(v >= 0.0);
            REQUIRE(v < 1.0);
        }
    }

    SECTION("rejects alpha <= 0") {
        CHECK_THROWS_AS(atkinson_index(mf(kQuarter), mf(kBaseRates), {0.0}),
                        InvalidParameterError);
        CHECK_THROWS_AS(atkinson_index(mf(kQuarter), mf(kBaseRates), {-1.0}),
                        InvalidParameterError);
    }
}

TEST_CASE("standardized SRI") {
    SECTION("baseline value at alpha = 1") {
        const double v = standardized_sri(mf(kQuarter), mf(kBaseRates), {1.0});
        CHECK(std::abs(v - oracle::kBaselineSsri1) < 1e-14);
    }

    SECTION("symmetric about 1/2 and minimal there") {
        CHECK(standardized_sri(mf(kQuarter), mf(kBaseRates), {0.4}) ==
              standardized_sri(mf(kQuarter), mf(kBaseRates), {0.6}));
        const double at_half = standardized_sri(mf(kQuarter), mf(kBaseRates), {0.5});
        for (double a : {1.0, 2.0, 4.0, 8.0})
            CHECK(at_half <= standardized_sri(mf(kQuarter), mf(kBaseRates), {a}));
    }

    SECTION("nondecreasing in alpha for alpha >= 1/2, range [0, 1)") {
        oracle::Gen gen(43);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            double prev = -1.0;
            for (double a : {0.5, 0.8, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0, 128.0}) {
                const double v = standardized_sri(mf(p), mf(q), {a});
                REQUIRE(v >= 0.0);
                REQUIRE(v < 1.0);
                REQUIRE(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("kullback-leibler pair") {
    SECTION("zero at equal probability vectors") {
        const auto [pq, qp] = kl_divergences(mf({0.25, 0.25, 0.5}), mf({0.25, 0.25, 0.5}));
        CHECK(pq == 0.0);
        CHECK(qp == 0.0);
    }

    SECTION("baseline pair equals (MLD, TI)") {
        std::vector<double> qbar(kBaseRates);
        for (double& v : qbar) v /= 1.3;
        const auto [pq, qp] = kl_divergences(mf(kQuarter), mf(qbar));
        CHECK(std::abs(pq - oracle::kBaselineMld) < 1e-14);
        CHECK(std::abs(qp - oracle::kBaselineTi) < 1e-14);
    }

    SECTION("asymmetric on asymmetric input") {
        const auto [pq, qp] = kl_divergences(mf({0.7, 0.3}), mf({0.3, 0.7}));
        CHECK(pq != qp);
    }

    SECTION("rejects zero masses") {
        CHECK_THROWS_AS(kl_divergences(mf({1, 0}), mf({1, 1})), ZeroMassGroupError);
        CHECK_THROWS_AS(kl_divergences(mf({1, 1}), mf({1, 0})), ZeroMassGroupError);
    }
}

TEST_CASE("alpha divergence") {
    SECTION("zero iff p = q") {
        const MassFunction p = mf({0.4, 0.6});
        CHECK(alpha_divergence(p, p, {2.0}) == Catch::Approx(0.0).margin(1e-15));
        CHECK(alpha_divergence(mf({0.4, 0.6}), mf({0.6, 0.4}), {2.0}) > 1e-3);
        // proportional but unequal masses do NOT give zero
        CHECK(alpha_divergence(mf({1, 1}), mf({2, 2}), {2.0}) > 1e-3);
    }

    SECTION("alpha = 1/2 matches the direct Hellinger-route formula") {
        oracle::Gen gen(47);
        for (int it = 0; it < 100; ++it) {
            auto p = gen.masses(4);
            auto q = gen.masses(4);
            // normalized inputs
            double sp = 0, sq = 0;
            for (double v : p) sp += v;
            for (double v : q) sq += v;
            for (double& v : p) v /= sp;
            for (double& v : q) v /= sq;
            const double got = alpha_divergence(mf(p), mf(q), {0.5});
            const double want = static_cast<double>(
                oracle::hellinger_route(gen.to_ld(p), gen.to_ld(q)));
            REQUIRE(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
        }
    }

    SECTION("positive homogeneity") {
        oracle::Gen gen(53);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(5);
            const auto q = gen.masses(5);
            std::vector<double> p2(p), q2(q);
            for (double& v : p2) v *= 2.0;
            for (double& v : q2) v *= 2.0;
            const double v1 = alpha_divergence(mf(p), mf(q), {3.0});
            const double v2 = alpha_divergence(mf(p2), mf(q2), {3.0});
            REQUIRE(std::abs(v2 - 2.0 * v1) <= 1e-12 * (1.0 + std::abs(v2)));
        }
    }

    SECTION("limits give the KL pair") {
        oracle::Gen gen(59);
        const auto p = gen.masses(4);
        const auto q = gen.masses(4);
        const auto [pq, qp] = kl_divergences(mf(p), mf(q));
        CHECK(std::abs(alpha_divergence(mf(p), mf(q), {1.0}) - pq) < 1e-14);
        CHECK(std::abs(alpha_divergence(mf(p), mf(q), {0.0}) - qp) < 1e-14);
        CHECK(std::abs(alpha_divergence(mf(p), mf(q), {1.0 + 2e-6}) - pq) <=
              1e-5 * (1.0 + std::abs(pq)));
        CHECK(std::abs(alpha_divergence(mf(p), mf(q), {2e-6}) - qp) <=
              1e-5 * (1.0 + std::abs(qp)));
    }
}

TEST_CASE("symmetrized reference-invariant GE") {
    SECTION("zero at proportional inputs") {
        CHECK(ref_invariant_sym_ge(mf({1, 2, 3}), mf({2, 4, 6}), {2.0}) ==
              Catch::Approx(0.0).margin(1e-12));
    }

    SECTION("invariant to rescaling, symmetric about 1/2") {
        oracle::Gen gen(61);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            std::vector<double> q5(q);
            for (double& v : q5) v *= 5.0;
            const double a = gen.uniform(0.1, 3.0);
            REQUIRE(std::abs(ref_invariant_sym_ge(mf(p), mf(q), {a}) -
                             ref_invariant_sym_ge(mf(p), mf(q5), {a})) <= 1e-12);
            REQUIRE(ref_invariant_sym_ge(mf(p), mf(q), {a}) ==
                    ref_invariant_sym_ge(mf(p), mf(q), {1.0 - a}));
        }
    }

    SECTION("alpha -> 1 value equals the STI") {
        oracle::Gen gen(67);
        const auto p = gen.masses(4);
        const auto q = gen.masses(4);
        const double sti = symmetrized_renyi(mf(p), mf(q), {1.0});
        CHECK(std::abs(ref_invariant_sym_ge(mf(p), mf(q), {1.0}) - sti) < 1e-14);
        CHECK(std::abs(ref_invariant_sym_ge(mf(p), mf(q), {1.0 + 1e-7}) - sti) <=
              1e-5 * (1.0 + std::abs(sti)));
    }

    SECTION("matches the plain-power oracle") {
        oracle::Gen gen(71);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            for (double a : {0.3, 0.5, 2.0, 4.0}) {
                const double got = ref_invariant_sym_ge(mf(p), mf(q), {a});
                const double want = static_cast<double>(
                    oracle::ref_inv_sym_ge(gen.to_ld(p), gen.to_ld(q), a));
                REQUIRE(std::abs(got - want) <= 1e-11 * (1.0 + std::abs(want)));
            }
        }
    }
}

TEST_CASE("proposition: alpha*SR vs alpha*SD ordering") {
    oracle::Gen gen(73);
    for (int it = 0; it < 1000; ++it) {
        const auto p = gen.masses(4);
        const auto q = gen.masses(4);
        for (double a : {1.5, 2.0, 4.0, 16.0}) {
            const double sr = a * symmetrized_renyi(mf(p), mf(q), {a});
            const double sd = a * ref_invariant_sym_ge(mf(p), mf(q), {a});
            REQUIRE(sr <= sd + 1e-12 * (1.0 + std::abs(sd)));
        }
        for (double a : {0.1, 0.5, 0.9}) {
            const double sr = a * symmetrized_renyi(mf(p), mf(q), {a});
            const double sd = a * ref_invariant_sym_ge(mf(p), mf(q), {a});
            REQUIRE(sr >= sd - 1e-12 * (1.0 + std::abs(sd)));
        }
    }
}

TEST_CASE("beta divergence") {
    SECTION("zero at p = q") {
        const MassFunction p = mf({0.3, 0.7});
        CHECK(beta_divergence(p, p, {0.4}) == Catch::Approx(0.0).margin(1e-15));
    }

    SECTION("near-zero beta agrees with KL(q||p)") {
        oracle::Gen gen(79);
        for (int it = 0; it < 50; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            const double want = kl_divergences(mf(p), mf(q)).second;
            const double got = beta_divergence(mf(p), mf(q), {1e-8});
            REQUIRE(std::abs(got - want) <= 1e-6 * (1.0 + std::abs(want)));
            // just outside the limit band too
            const double got2 = beta_divergence(mf(p), mf(q), {2e-6});
            REQUIRE(std::abs(got2 - want) <= 1e-4 * (1.0 + std::abs(want)));
        }
    }

    SECTION("near-one beta agrees with Itakura-Saito") {
        oracle::Gen gen(83);
        for (int it = 0; it < 50; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            const double want =
                static_cast<double>(oracle::itakura_saito(gen.to_ld(p), gen.to_ld(q)));
            const double got = beta_divergence(mf(p), mf(q), {1.0 - 1e-8});
            REQUIRE(std::abs(got - want) <= 1e-6 * (1.0 + std::abs(want)));
        }
    }

    SECTION("matches the plain-power oracle") {
        oracle::Gen gen(89);
        for (int it = 0; it < 100; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            for (double b : {-1.0, 0.3, 0.5, 2.0}) {
                const double got = beta_divergence(mf(p), mf(q), {b});
                const double want =
                    static_cast<double>(oracle::beta_directed(gen.to_ld(p), gen.to_ld(q), b));
                REQUIRE(std::abs(got - want) <= 1e-11 * (1.0 + std::abs(want)));
            }
        }
    }

    SECTION("nonnegative") {
        oracle::Gen gen(97);
        for (int it = 0; it < 200; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            const double b = gen.uniform(-2.0, 3.0);
            REQUIRE(beta_divergence(mf(p), mf(q), {b}) >= -1e-12);
        }
    }

    SECTION("rejects zero p-mass") {
        CHECK_THROWS_AS(beta_divergence(mf({0, 1}), mf({1, 1}), {0.5}), ZeroMassGroupError);
    }
}

TEST_CASE("symmetrized beta divergence") {
    SECTION("zero at equal shares, invariant under rescaling") {
        CHECK(symmetrized_beta(mf({1, 2, 3}), mf({2, 4, 6}), {0.7}) ==
              Catch::Approx(0.0).margin(1e-14));
        oracle::Gen gen(101);
        const auto p = gen.masses(4);
        const auto q = gen.masses(4);
        std::vector<double> q5(q);
        for (double& v : q5) v *= 5.0;
        CHECK(std::abs(symmetrized_beta(mf(p), mf(q), {0.7}) -
                       symmetrized_beta(mf(p), mf(q5), {0.7})) <= 1e-13);
    }

    SECTION("equals the average of the two directed divergences on normalized shares") {
        oracle::Gen gen(103);
        for (int it = 0; it < 200; ++it) {
            auto p = gen.masses(4);
            auto q = gen.masses(4);
            double sp = 0, sq = 0;
            for (double v : p) sp += v;
            for (double v : q) sq += v;
            for (double& v : p) v /= sp;
            for (double& v : q) v /= sq;
            for (const double b : {gen.uniform(0.05, 2.5), gen.uniform(-2.5, -0.05)}) {
                const double got = symmetrized_beta(mf(p), mf(q), {b});
                const double want = 0.5 * (beta_divergence(mf(p), mf(q), {b}) +
                                           beta_divergence(mf(q), mf(p), {b}));
                REQUIRE(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
            }
        }
    }

    SECTION("nonnegative for beta > 0") {
        oracle::Gen gen(107);
        for (int it = 0; it < 200; ++it) {
            const auto p = gen.masses(4);
            const auto q = gen.masses(4);
            REQUIRE(symmetrized_beta(mf(p), mf(q), {gen.uniform(0.05, 3.0)}) >= -1e-13);
        }
    }

    SECTION("rejects beta = 0") {
        CHECK_THROWS_AS(symmetrized_beta(mf({1, 2}), mf({2, 1}), {0.0}), InvalidParameterError);
    }
}

TEST_CASE("mass function validation") {
    CHECK_THROWS_AS(MassFunction({1.0}), InvalidParameterError);
    CHECK_THROWS_AS(MassFunction({0.0, 0.0}), InvalidParameterError);
    CHECK_THROWS_AS(MassFunction({1.0, -0.5}), InvalidParameterError);
    CHECK_NOTHROW(MassFunction({0.0, 1.0}));
}
