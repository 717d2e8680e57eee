#include <doctest.h>

#include <random>

#include "hetnet/errors.hpp"
#include "hetnet/index_kernel.hpp"

using namespace hetnet;

TEST_CASE("f_index values") {
    CHECK(f_index(0.3).is_pos_inf());
    CHECK(f_index(0.0).is_pos_inf());
    CHECK(f_index(-0.5).value() == doctest::Approx(1.0));
    CHECK(f_index(-2.0).value() == doctest::Approx(-1.0));
    CHECK_THROWS_AS(f_index(-1.0), NonGeneric);
}

TEST_CASE("node_ab ratios") {
    auto p = node_ab({3, 1.5, 2, 1});
    CHECK(p.a == doctest::Approx(0.75));
    CHECK(p.b == doctest::Approx(-0.5));
    p = node_ab({3, 1.2, 1, -0.8});
    CHECK(p.a == doctest::Approx(1.2));
    CHECK(p.b == doctest::Approx(0.8));
    CHECK_THROWS(node_ab({1, 1, 1, 1}));
    CHECK_THROWS_AS(node_ab({3, -1, 1, 0.5}), PositivityViolation);
}

TEST_CASE("two-node cycles") {
    auto r = b2_cycle_indices({CycleNodeParams{2, 1}, {2, 1}});
    CHECK(r.sigma[0].is_pos_inf());
    CHECK(r.sigma[1].is_pos_inf());

    r = b2_cycle_indices({CycleNodeParams{2, -1}, {2, -1}});
    CHECK(r.sigma[0].is_neg_inf());
    CHECK(r.sigma[1].is_neg_inf());

    r = b2_cycle_indices({CycleNodeParams{0.75, -0.5}, {1.5, 1.0}});
    REQUIRE(r.sigma[0].is_finite());
    CHECK(r.sigma[0].value() == doctest::Approx(1.0));
    CHECK(r.sigma[1].is_pos_inf());
}

TEST_CASE("three-node cycles") {
    auto r = b3_cycle_indices({CycleNodeParams{2, 1}, {2, 1}, {2, 1}});
    for (const auto& s : r.sigma) CHECK(s.is_pos_inf());

    // xi3-cycle of P0.
    r = b3_cycle_indices({CycleNodeParams{0.75, -0.5}, {1.5, 1.0}, {1.2, 0.8}});
    REQUIRE(r.sigma[0].is_finite());
    CHECK(r.sigma[0].value() == doctest::Approx(1.0));
    CHECK(r.sigma[1].is_pos_inf());
    CHECK(r.sigma[2].is_pos_inf());

    // xi3-cycle of P1: b~2 = -0.5.
    r = b3_cycle_indices({CycleNodeParams{0.75, -0.5}, {1.5, -0.5}, {1.2, 0.8}});
    for (const auto& s : r.sigma) CHECK(s.is_neg_inf());
    CHECK(r.branch == "iv.a");
}

TEST_CASE("cycle indices follow the nodes under rotation") {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> a(0.3, 2.5), b(-2.0, 2.0);
    int checked = 0;
    for (int k = 0; k < 2000; ++k) {
        std::array<CycleNodeParams, 3> p{};
        for (auto& n : p) n = {a(g), b(g)};
        CycleIndices3 r0;
        try {
            r0 = b3_cycle_indices(p);
        } catch (const NonGeneric&) {
            continue;
        }
        const std::array<CycleNodeParams, 3> q{p[1], p[2], p[0]};
        const CycleIndices3 r1 = b3_cycle_indices(q);
        for (int j = 0; j < 3; ++j) {
            const ExtReal x = r0.sigma[(j + 1) % 3], y = r1.sigma[j];
            if (x.is_finite() && y.is_finite())
                CHECK(x.value() == doctest::Approx(y.value()).epsilon(1e-9));
            else
                CHECK(x == y);
        }
        ++checked;
    }
    CHECK(checked > 1500);
}
