#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fbc/metrics.hpp"
#include "support/synthetic.hpp"

using namespace fbc;

TEST_CASE("var index") {
    SUBCASE("constant block is perfect") {
        const auto m = synthetic::from_values({{3, 3}, {3, 3}});
        CHECK(var_index(m) == 0.0);
    }
    SUBCASE("hand-summed 2x2") {
        const auto m = synthetic::from_values({{1, 2}, {3, 4}});
        CHECK(var_index(m) == doctest::Approx(5.0).epsilon(1e-15));
    }
    SUBCASE("single offset cell against the direct sum") {
        const double eps = 0.37;
        auto m = synthetic::from_values({{2, 2, 2}, {2, 2, 2}});
        m.at(1, 2) = 2.0 + eps;
        double mean = 0.0;
        for (double v : m.values) mean += v;
        mean /= 6.0;
        double direct = 0.0;
        for (double v : m.values) direct += (v - mean) * (v - mean);
        CHECK(var_index(m) == doctest::Approx(direct).epsilon(1e-15));
        CHECK(var_index(m) == doctest::Approx(eps * eps * (1.0 - 1.0 / 6.0)).epsilon(1e-12));
    }
}

TEST_CASE("angle matrix") {
    SUBCASE("constant row maps to zero angles") {
        const auto m = synthetic::from_values({{5, 5, 5}, {1, 2, 3}});
        const auto theta = angle_matrix(m);
        CHECK(theta[0][0] == 0.0);
        CHECK(theta[0][1] == 0.0);
    }
    SUBCASE("unit-slope rows give 45 degrees") {
        const auto m = synthetic::from_values({{1, 2, 3}, {4, 5, 6}});
        const auto theta = angle_matrix(m);
        for (const auto& row : theta)
            for (double a : row) CHECK(a == doctest::Approx(45.0).epsilon(1e-12));
    }
    SUBCASE("negated differences negate angles") {
        const auto up = synthetic::from_values({{1, 2, 3}, {0, 0, 0}});
        const auto down = synthetic::from_values({{3, 2, 1}, {0, 0, 0}});
        const auto tu = angle_matrix(up);
        const auto td = angle_matrix(down);
        for (std::size_t t = 0; t < 2; ++t) CHECK(tu[0][t] == doctest::Approx(-td[0][t]));
    }
    SUBCASE("angles strictly inside (-90, 90)") {
        std::mt19937_64 rng(101);
        const auto m = synthetic::random_matrix(rng, 10, 8, -50.0, 50.0);
        for (const auto& row : angle_matrix(m))
            for (double a : row) {
                CHECK(a > -90.0);
                CHECK(a < 90.0);
            }
    }
    SUBCASE("needs two columns") {
        fbc::ExpressionMatrix m;
        m.n_genes = 2;
        m.n_conditions = 1;
        m.values = {1.0, 2.0};
        CHECK_THROWS(angle_matrix(m));
    }
}

TEST_CASE("mfd index") {
    SUBCASE("identical rows give zero") {
        const auto m = synthetic::from_values({{1, 4, 2}, {1, 4, 2}, {1, 4, 2}});
        CHECK(mfd_index(m) <= 1e-12);
    }
    SUBCASE("additive shift gives zero") {
        const auto m = synthetic::from_values({{1, 2, 3}, {5, 6, 7}});
        CHECK(mfd_index(m) <= 1e-9);
    }
    SUBCASE("opposite unit slopes give 45") {
        const auto m = synthetic::from_values({{1, 2}, {2, 1}});
        CHECK(mfd_index(m) == doctest::Approx(45.0).epsilon(1e-12));
    }
    SUBCASE("zero iff angle rows identical") {
        const auto mixed = synthetic::from_values({{1, 2, 3}, {1, 3, 2}});
        CHECK(mfd_index(mixed) > 1e-9);
    }
    SUBCASE("invariant under row permutation") {
        std::mt19937_64 rng(103);
        const auto m = synthetic::random_matrix(rng, 6, 5);
        auto p = m;
        std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 5; ++j) p.at(i, j) = m.at(perm[i], j);
        CHECK(mfd_index(p) == doctest::Approx(mfd_index(m)).epsilon(1e-12));
    }
}

TEST_CASE("msr index") {
    SUBCASE("constant block") {
        const auto m = synthetic::from_values({{7, 7}, {7, 7}});
        CHECK(msr_index(m) == 0.0);
    }
    SUBCASE("hand-evaluated checkerboard residues") {
        const auto m = synthetic::from_values({{1, 2}, {3, 5}});
        CHECK(msr_index(m) == doctest::Approx(0.0625).epsilon(1e-15));
    }
    SUBCASE("additive model vanishes") {
        std::mt19937_64 rng(107);
        for (int trial = 0; trial < 25; ++trial) {
            std::uniform_int_distribution<std::size_t> nd(2, 12);
            const auto m = synthetic::additive_matrix(rng, nd(rng), nd(rng));
            CHECK(msr_index(m) <= 1e-9);
        }
    }
    SUBCASE("invariant under row and column permutations") {
        std::mt19937_64 rng(109);
        const auto m = synthetic::random_matrix(rng, 5, 4);
        auto p = m;
        std::vector<std::size_t> rp{2, 0, 4, 1, 3}, cp{3, 1, 0, 2};
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 4; ++j) p.at(i, j) = m.at(rp[i], cp[j]);
        CHECK(msr_index(p) == doctest::Approx(msr_index(m)).epsilon(1e-12));
        CHECK(var_index(p) == doctest::Approx(var_index(m)).epsilon(1e-12));
    }
}

TEST_CASE("evaluate_metrics bundles all three") {
    const auto m = synthetic::from_values({{1, 2}, {3, 4}, {5, 6}});
    const auto mm = evaluate_metrics(m);
    CHECK(mm.rows == 3);
    CHECK(mm.cols == 2);
    CHECK(mm.var == doctest::Approx(var_index(m)));
    CHECK(mm.mfd == doctest::Approx(mfd_index(m)));
    CHECK(mm.msr == doctest::Approx(msr_index(m)));
    CHECK(mm.mfd <= 180.0);
}
