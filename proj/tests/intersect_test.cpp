// Crossing points of solution pairs on nested meshes: geometric roots of the
// nodal difference, the local-coincidence filter, the predictive path through
// the Green column, and invariance of the crossings under refinement.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sperturb/assembly.hpp"
#include "sperturb/fem.hpp"
#include "sperturb/intersect.hpp"
#include "sperturb/mesh.hpp"
#include "sperturb/problem.hpp"
#include "sperturb/rng.hpp"

namespace sperturb {
namespace {

Mesh augment(const Mesh& base, int interval, std::vector<double> fracs) {
    const double xl = base.nodes[static_cast<std::size_t>(interval - 1)];
    const double xr = base.nodes[static_cast<std::size_t>(interval)];
    for (double& f : fracs)
        f = xl + f * (xr - xl);
    return add_points(base, fracs);
}

TEST(Geometric, ZeroSolutionsAreCoincidentEverywhere) {
    Problem p = make_rde(0.1);
    p.rhs = Polynomial{{0.0}};
    const Mesh base = uniform(8);
    const FemSolution a = solve(p, base);
    const FemSolution b = solve(p, augment(base, 9, {0.5}));
    const auto qs = geometric_intersections(a, b);
    ASSERT_EQ(qs.size(), 7u);
    for (std::size_t k = 0; k < qs.size(); ++k) {
        EXPECT_EQ(qs[k].interval_index, static_cast<int>(k) + 2);
        EXPECT_TRUE(qs[k].coincident);
        EXPECT_FALSE(qs[k].exists);
    }
}

TEST(Geometric, RejectsNonNestedAndMultiIntervalExtras) {
    const Problem p = make_cde(1e-3);
    const FemSolution a = solve(p, uniform(8));
    EXPECT_THROW(geometric_intersections(a, solve(p, uniform(9))), std::invalid_argument);
    EXPECT_THROW(geometric_intersections(solve(p, uniform(9)), a), std::invalid_argument);
    // 0.15 and 0.35 fall in different intervals of the 9-element mesh
    const FemSolution c = solve(p, add_points(uniform(8), {0.15, 0.35}));
    EXPECT_THROW(geometric_intersections(a, c), std::invalid_argument);
}

TEST(Geometric, ReactionDecayTripsCoincidenceFarFromFirstIntervalExtras) {
    // the difference decays geometrically away from the refined first
    // interval; beyond node 4 it is under 1e-6 of the local scale
    const Problem p = make_rde(1e-10);
    const Mesh base = uniform(8);
    const FemSolution a = solve(p, base);
    const FemSolution b = solve(p, augment(base, 1, {0.5}));
    const auto qs = geometric_intersections(a, b);
    ASSERT_EQ(qs.size(), 7u);
    for (const auto& q : qs) {
        if (q.interval_index <= 4) {
            EXPECT_TRUE(q.exists) << "i=" << q.interval_index;
            EXPECT_FALSE(q.coincident);
        } else {
            EXPECT_TRUE(q.coincident) << "i=" << q.interval_index;
            EXPECT_FALSE(q.exists);
        }
    }
}

TEST(Geometric, ConvectionInflowRefinementYieldsNoCrossings) {
    // refining the inflow interval perturbs the solution along the smooth
    // fundamental mode: same sign everywhere, no transversal crossing
    const Problem p = make_cde(1e-3);
    const Mesh base = uniform(15);
    const FemSolution a = solve(p, base);
    const FemSolution b = solve(p, augment(base, 1, {0.5}));
    const auto qs = geometric_intersections(a, b);
    ASSERT_EQ(qs.size(), 14u);
    for (const auto& q : qs) {
        EXPECT_FALSE(q.exists);
        EXPECT_FALSE(q.coincident);
    }
}

// plain uniform mesh, unresolved outflow layer: the two solutions cross a
// tiny distance from every second node, and the crossings sit on the
// interpolant of the exact solution
TEST(Geometric, ConvectionCrossingsHugAlternateNodes) {
    const Problem p = make_cde(1e-10);
    const ExactSolution es{ExampleKind::cde, 1e-10, 0.5};
    const Mesh base = uniform(7);
    const FemSolution a = solve(p, base);
    const FemSolution b = solve(p, augment(base, 8, {0.5}));
    const auto qs = geometric_intersections(a, b);
    ASSERT_EQ(qs.size(), 6u);

    const double xq[6] = {0.24999999959999999, 0.25000000039999998, 0.49999999919999999,
                          0.50000000079999996, 0.74999999880000001, 0.7500000012000001};
    const double ee[6] = {2.4999984721274515e-11, 2.4999981251827563e-11,
                          4.9999976381442934e-11, 5.000000413701855e-11,
                          7.5000006205527825e-11, 7.4999839672074131e-11};
    const FemSolution ip = interpolant(es, base);
    for (std::size_t k = 0; k < 6; ++k) {
        const auto& q = qs[k];
        ASSERT_TRUE(q.exists) << "i=" << q.interval_index;
        EXPECT_EQ(q.interval_index, static_cast<int>(k) + 2);
        EXPECT_NEAR(q.x, xq[k], 1e-12);
        const std::size_t i = static_cast<std::size_t>(q.interval_index);
        EXPECT_GT(q.x, base.nodes[i - 1]);
        EXPECT_LT(q.x, base.nodes[i]);
        const double err_exact = std::abs(q.y - exact_eval(es, q.x));
        EXPECT_GT(err_exact, 0.25 * ee[k]);
        EXPECT_LT(err_exact, 4.0 * ee[k]);
        EXPECT_LE(std::abs(q.y - eval(ip, q.x)), 1e-15);
    }
    // difference magnitudes alternate by ~3e-9, so crossings hug the left
    // node on odd intervals and the right node on even ones
    EXPECT_GT(qs[0].ratio, 1e6);
    EXPECT_LT(qs[1].ratio, 1e-6);
    EXPECT_GT(qs[2].ratio, 1e6);
    EXPECT_LT(qs[3].ratio, 1e-6);
}

TEST(Geometric, PointMassCrossingsMatchFrozenPositions) {
    {
        // mass near the right end, last interval refined through the mass
        const Problem p = make_green(1e-5, 13.0 / 14.0);
        const ExactSolution es{ExampleKind::green, 1e-5, 13.0 / 14.0};
        const Mesh base = uniform(6);
        const FemSolution a = solve(p, base);
        const FemSolution b = solve(p, augment(base, 7, {0.5}));
        const auto qs = geometric_intersections(a, b);
        ASSERT_EQ(qs.size(), 5u);
        const double xq[5] = {0.17142857042057141, 0.31578947249750688, 0.45875251388078331,
                              0.60161724946167072, 0.74447493739801585};
        for (std::size_t k = 0; k < 5; ++k) {
            ASSERT_TRUE(qs[k].exists);
            EXPECT_EQ(qs[k].interval_index, static_cast<int>(k) + 2);
            EXPECT_NEAR(qs[k].x, xq[k], 1e-12);
            EXPECT_LE(std::abs(qs[k].y - exact_eval(es, qs[k].x)), 1e-13);
        }
    }
    {
        // centered mass, the interval containing it refined
        const Problem p = make_green(1e-5, 0.5);
        const ExactSolution es{ExampleKind::green, 1e-5, 0.5};
        const Mesh base = uniform(6);
        const FemSolution a = solve(p, base);
        const FemSolution b = solve(p, augment(base, 4, {0.5}));
        const auto qs = geometric_intersections(a, b);
        ASSERT_EQ(qs.size(), 4u);
        const int iv[4] = {2, 3, 5, 6};
        const double xq[4] = {0.17142857042057141, 0.31578947249750688, 0.68421052750249312,
                              0.82857142957942853};
        for (std::size_t k = 0; k < 4; ++k) {
            ASSERT_TRUE(qs[k].exists);
            EXPECT_EQ(qs[k].interval_index, iv[k]);
            EXPECT_NEAR(qs[k].x, xq[k], 1e-12);
            EXPECT_LE(std::abs(qs[k].y - exact_eval(es, qs[k].x)), 1e-13);
        }
    }
}

TEST(Predicted, AgreesWithGeometricWithoutSecondSolve) {
    const Problem p = make_cde(1e-10);
    const Mesh base = uniform(7);
    const FemSolution a = solve(p, base);
    const TridiagonalSystem sys = assemble(p, base);
    const auto pred = predicted_intersections(sys, a);
    const auto geo = geometric_intersections(a, solve(p, augment(base, 8, {0.5})));
    ASSERT_EQ(pred.size(), geo.size());
    for (std::size_t k = 0; k < pred.size(); ++k) {
        EXPECT_EQ(pred[k].interval_index, geo[k].interval_index);
        ASSERT_EQ(pred[k].exists, geo[k].exists);
        EXPECT_NEAR(pred[k].x, geo[k].x, 1e-10);
        EXPECT_NEAR(pred[k].y, geo[k].y, 1e-6);
    }
}

TEST(Predicted, ReactionChainAlternatesEverywhere) {
    const Problem p = make_rde(1e-10);
    const Mesh m = uniform(4);
    const auto qs = predicted_intersections(assemble(p, m), solve(p, m));
    ASSERT_EQ(qs.size(), 3u);
    for (const auto& q : qs) {
        EXPECT_TRUE(q.exists);
        EXPECT_TRUE(std::isfinite(q.x));
        EXPECT_TRUE(std::isfinite(q.y));
        const std::size_t i = static_cast<std::size_t>(q.interval_index);
        EXPECT_GT(q.x, m.nodes[i - 1]);
        EXPECT_LT(q.x, m.nodes[i]);
    }
}

TEST(Predicted, RejectsSystemMeshSizeMismatch) {
    const Problem p = make_rde(1e-10);
    EXPECT_THROW(predicted_intersections(assemble(p, uniform(4)), solve(p, uniform(5))),
                 std::invalid_argument);
}

TEST(Geometric, SinglePointRefinementLeavesCrossingsFixed) {
    const Problem p = make_cde(1e-3);
    const Mesh base = uniform(15);
    const FemSolution a = solve(p, base);
    const double xl = base.nodes[15], xr = base.nodes[16];
    SplitMix64 rng(20260825ULL);
    std::vector<double> lo(14, 1e300), hi(14, -1e300);
    for (int t = 0; t < 50; ++t) {
        const double pt = xl + (0.02 + 0.96 * rng.next_double()) * (xr - xl);
        const FemSolution b = solve(p, add_points(base, {pt}));
        const auto qs = geometric_intersections(a, b);
        ASSERT_EQ(qs.size(), 14u);
        for (std::size_t k = 0; k < qs.size(); ++k) {
            ASSERT_TRUE(qs[k].exists) << "trial " << t << " i=" << qs[k].interval_index;
            lo[k] = std::min(lo[k], qs[k].x);
            hi[k] = std::max(hi[k], qs[k].x);
        }
    }
    for (std::size_t k = 0; k < 14; ++k)
        EXPECT_LE(hi[k] - lo[k], 1e-9);
}

}  // namespace
}  // namespace sperturb
