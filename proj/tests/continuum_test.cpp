#include "rcdlab/continuum.hpp"
#include "rcdlab/errors.hpp"
#include "rcdlab/rcd_engine.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rcdlab;
using namespace rcdlab::continuum;
using rcdlab::testing::q;

namespace {

Rational grid(std::mt19937_64& rng, long den = 400) { return q(static_cast<long>(rng() % (den + 1)), den); }

Interval random_interval(std::mt19937_64& rng)
{
    Rational a = grid(rng);
    Rational b = grid(rng);
    if (a > b) {
        std::swap(a, b);
    }
    return {a, b, rng() % 2 == 0, rng() % 2 == 0};
}

// Random piecewise-constant densities and atoms, scaled to total mass one.
HybridMeasure random_hybrid(std::mt19937_64& rng, bool with_atoms)
{
    auto density = [&] {
        std::vector<Rational> breaks{q(0)};
        for (int i = 0; i < 3; ++i) {
            breaks.push_back(q(static_cast<long>(100 * (i + 1) + rng() % 90), 400));
        }
        breaks.push_back(q(1));
        std::vector<Rational> values;
        for (int i = 0; i < 4; ++i) {
            values.push_back(q(static_cast<long>(rng() % 5)));
        }
        return std::make_pair(breaks, values);
    };
    auto [b0, v0] = density();
    auto [b1, v1] = density();
    std::vector<WeightedAtom> atoms;
    if (with_atoms) {
        for (int i = 0; i < 3; ++i) {
            atoms.push_back({{q(static_cast<long>(3 * i + 1), 10), static_cast<int>(rng() % 2)},
                             q(static_cast<long>(1 + rng() % 4))});
        }
    }
    Rational total = PiecewiseDensity(b0, v0).total() + PiecewiseDensity(b1, v1).total();
    for (const auto& a : atoms) {
        total += a.weight;
    }
    if (sgn(total) == 0) {
        return HybridMeasure::lebesgue_times(q(1, 2));
    }
    for (auto& v : v0) {
        v /= total;
    }
    for (auto& v : v1) {
        v /= total;
    }
    for (auto& a : atoms) {
        a.weight /= total;
    }
    return HybridMeasure(PiecewiseDensity(b0, v0), PiecewiseDensity(b1, v1), atoms);
}

} // namespace

TEST(IntervalUnion, MergesClipsAndKeepsOpenGaps)
{
    const IntervalUnion merged({Interval::closed(q(1, 2), q(3, 4)), Interval::closed(q(1, 4), q(1, 2))});
    ASSERT_EQ(merged.pieces().size(), 1U);
    EXPECT_EQ(merged.pieces()[0], Interval::closed(q(1, 4), q(3, 4)));

    const IntervalUnion gap({{q(0), q(1, 2), true, false}, {q(1, 2), q(1), false, true}});
    EXPECT_EQ(gap.pieces().size(), 2U);
    EXPECT_FALSE(gap.contains(q(1, 2)));
    EXPECT_EQ(gap.length(), 1);

    const IntervalUnion clipped({Interval::closed(q(-1), q(1, 2)), Interval::closed(q(2), q(3))});
    ASSERT_EQ(clipped.pieces().size(), 1U);
    EXPECT_EQ(clipped.pieces()[0], Interval::closed(q(0), q(1, 2)));

    EXPECT_TRUE(IntervalUnion({Interval::open(q(1, 3), q(1, 3))}).is_empty());
    EXPECT_EQ(IntervalUnion({Interval::closed(q(1, 3), q(1, 3))}).pieces().size(), 1U);
}

TEST(HybridMass, LebesgueTimesMOnRectangle)
{
    const auto rho = HybridMeasure::lebesgue_times(q(1, 3));
    const auto e = RectEvent::rect(Interval::closed(0, q(1, 2)), {true, false});
    EXPECT_EQ(hybrid_mass(rho, e), q(1, 6));
    EXPECT_NEAR(oracle::lebesgue_product_quadrature(1.0 / 3.0, e), 1.0 / 6.0, 1e-9);
}

TEST(HybridMass, DiracTimesMOnSingleton)
{
    const auto nu = HybridMeasure::dirac_times(q(1, 2), q(1, 3));
    EXPECT_EQ(hybrid_mass(nu, GEvent::point({q(1, 2), 0})), q(1, 3));
    EXPECT_EQ(hybrid_mass(nu, GEvent::point({q(1, 2), 1})), q(2, 3));
    EXPECT_EQ(hybrid_mass(nu, GEvent::point({q(1, 3), 0})), 0);
}

TEST(HybridMass, EmptyEventHasZeroMass)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto mu = random_hybrid(rng, true);
        EXPECT_EQ(hybrid_mass(mu, RectEvent()), 0);
        EXPECT_EQ(hybrid_mass(mu, GEvent(IntervalUnion())), 0);
        EXPECT_EQ(hybrid_mass(mu, GEvent::full()), 1);
    }
}

TEST(HybridMass, FinitelyAdditiveAndMonotone)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const auto mu = random_hybrid(rng, trial % 2 == 0);
        const Interval whole = random_interval(rng);
        if (whole.is_empty()) {
            continue;
        }
        // Split at an atom location half the time so endpoint handling counts.
        const Rational cut = trial % 4 == 0 ? q(4, 10) : (whole.lo + whole.hi) / 2;
        if (!whole.contains(cut)) {
            continue;
        }
        const FiberSet fibers{rng() % 2 == 0, true};
        const Interval left{whole.lo, cut, whole.lo_closed, false};
        const Interval right{cut, whole.hi, true, whole.hi_closed};
        const Rational total = hybrid_mass(mu, RectEvent::rect(whole, fibers));
        EXPECT_EQ(hybrid_mass(mu, RectEvent::rect(left, fibers)) + hybrid_mass(mu, RectEvent::rect(right, fibers)),
                  total);
        const Interval inner{left.lo, cut, left.lo_closed, true};
        EXPECT_LE(hybrid_mass(mu, RectEvent::rect(inner, fibers)), total);
        EXPECT_LE(total, 1);
    }
}

TEST(SingletonIsNull, AtomlessOnlyAndBoundaryPoints)
{
    const auto rho = HybridMeasure::lebesgue_times(q(1, 3));
    EXPECT_TRUE(singleton_is_null(rho, q(1, 2)));
    EXPECT_TRUE(singleton_is_null(rho, q(0)));
    const HybridMeasure with_atom(PiecewiseDensity::constant(q(1, 2)), PiecewiseDensity::zero(),
                                  {{{q(1, 2), 0}, q(1, 2)}});
    EXPECT_THROW(singleton_is_null(with_atom, q(1, 2)), AtomlessViolation);
}

TEST(GEvent, ValidatesPointModifications)
{
    const IntervalUnion base({Interval::closed(q(1, 4), q(3, 4))});
    EXPECT_THROW(GEvent(base, {{q(1, 2), 0}}), InvalidMeasure);
    EXPECT_THROW(GEvent(base, {}, {{q(7, 8), 1}}), InvalidMeasure);
    const GEvent g(base, {{q(1, 8), 0}}, {{q(1, 2), 1}});
    EXPECT_TRUE(g.contains({q(1, 8), 0}));
    EXPECT_FALSE(g.contains({q(1, 8), 1}));
    EXPECT_TRUE(g.contains({q(1, 2), 0}));
    EXPECT_FALSE(g.contains({q(1, 2), 1}));
}

TEST(GEvent, NullModificationsNeverChangeAtomlessMass)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rho = random_hybrid(rng, false);
        const IntervalUnion base({random_interval(rng), random_interval(rng)});
        std::vector<FiberPoint> added;
        std::vector<FiberPoint> removed;
        for (int i = 0; i < 5; ++i) {
            const FiberPoint p{grid(rng, 997), static_cast<int>(rng() % 2)};
            (base.contains(p.x) ? removed : added).push_back(p);
        }
        const GEvent plain(base);
        const GEvent modified(base, added, removed);
        EXPECT_EQ(hybrid_mass(rho, modified), hybrid_mass(rho, plain));
        const auto a = RectEvent::rect(random_interval(rng), {true, rng() % 2 == 0});
        EXPECT_EQ(hybrid_mass(rho, a, modified), hybrid_mass(rho, a, plain));
    }
}

TEST(ContinuumIdentity, WorkedPair)
{
    const std::vector<GEvent> gs{GEvent(IntervalUnion({Interval::closed(q(1, 4), q(3, 4))}))};
    const std::vector<RectEvent> as{RectEvent::rect(Interval::closed(0, q(1, 2)), {true, false})};
    const auto report = remark5_identity_check(q(1, 3), gs, as);
    ASSERT_EQ(report.pairs_checked, 1U);
    EXPECT_TRUE(report.all_exact);
    EXPECT_EQ(report.pairs[0].lhs, q(1, 12));
    EXPECT_EQ(report.pairs[0].rhs, q(1, 12));
    const auto quad = oracle::remark5_quadrature(1.0 / 3.0, gs[0], as[0]);
    EXPECT_NEAR(quad.lhs, 1.0 / 12.0, 1e-6);
    EXPECT_NEAR(quad.rhs, 1.0 / 12.0, 1e-6);
}

TEST(ContinuumIdentity, NormalizationAndNullModification)
{
    const auto full = remark5_identity_check(q(1, 3), {GEvent::full()},
                                             {RectEvent::rect(Interval::closed(0, 1), {true, true})});
    EXPECT_EQ(full.pairs[0].lhs, 1);
    EXPECT_EQ(full.pairs[0].rhs, 1);

    const IntervalUnion base({Interval::closed(q(1, 4), q(3, 4))});
    const std::vector<GEvent> gs{GEvent(base), GEvent(base, {{q(1, 8), 0}}, {{q(1, 2), 0}})};
    const std::vector<RectEvent> as{RectEvent::rect(Interval::closed(0, q(1, 2)), {true, false})};
    const auto report = remark5_identity_check(q(1, 3), gs, as);
    EXPECT_TRUE(report.all_exact);
    EXPECT_EQ(report.pairs[0].lhs, report.pairs[1].lhs);
    EXPECT_EQ(report.pairs[0].rhs, report.pairs[1].rhs);
}

TEST(ContinuumIdentity, BatteryIsExactAndMatchesQuadrature)
{
    const auto battery = standard_battery(400, 9);
    ASSERT_EQ(battery.pair_count(), 400U);
    const auto report = remark5_identity_check(q(1, 3), battery.g_events, battery.a_events);
    EXPECT_EQ(report.pairs_checked, 400U);
    EXPECT_TRUE(report.all_exact);
    for (std::size_t i = 0; i < report.pairs.size(); i += 7) {
        const auto& p = report.pairs[i];
        const auto quad = oracle::remark5_quadrature(1.0 / 3.0, battery.g_events[p.g_index], battery.a_events[p.a_index]);
        EXPECT_NEAR(quad.lhs, to_double(p.lhs), 1e-6);
        EXPECT_NEAR(quad.rhs, to_double(p.rhs), 1e-6);
    }
}

TEST(ContinuumIdentity, KernelIntegralSeesAtomsOfRho)
{
    // rho = delta_{1/2} (x) m itself: the kernel integral reduces to atom sums.
    const DiracProductKernel k(q(1, 3));
    const auto rho = HybridMeasure::dirac_times(q(1, 2), q(1, 3));
    const auto a = RectEvent::rect(Interval::closed(0, q(1, 2)), {true, false});
    EXPECT_EQ(integrate_kernel(rho, k, GEvent::full(), a), q(1, 3));
    EXPECT_EQ(hybrid_mass(rho, a, GEvent::full()), q(1, 3));
}

TEST(ContinuumIdentity, SecondCoordinateLawMustMatchM)
{
    // With rho = Lebesgue (x) m' and m' != m the same kernel is not an rcd:
    // rho([0,1] x {0}) = m'(0) but the kernel integral gives m(0).
    const DiracProductKernel k(q(1, 3));
    const auto rho = HybridMeasure::lebesgue_times(q(1, 2));
    const auto a = RectEvent::rect(Interval::closed(0, 1), {true, false});
    EXPECT_EQ(hybrid_mass(rho, a, GEvent::full()), q(1, 2));
    EXPECT_EQ(integrate_kernel(rho, k, GEvent::full(), a), q(1, 3));
}

TEST(StandardBattery, ExactCountsAndDeterminism)
{
    EXPECT_EQ(standard_battery(1).pair_count(), 1U);
    EXPECT_EQ(standard_battery(2500).g_events.size(), 50U);
    EXPECT_EQ(standard_battery(7).pair_count(), 7U);
    EXPECT_EQ(standard_battery(0).pair_count(), 0U);
    const auto a = standard_battery(60, 4);
    const auto b = standard_battery(60, 4);
    for (std::size_t i = 0; i < a.g_events.size(); ++i) {
        EXPECT_EQ(a.g_events[i].base(), b.g_events[i].base());
        EXPECT_EQ(a.g_events[i].added_null(), b.g_events[i].added_null());
    }
}

TEST(TrivialityFailure, ReturnsM0)
{
    EXPECT_EQ(triviality_failure(q(1, 3), q(1, 2)), q(1, 3));
    EXPECT_EQ(triviality_failure(q(1, 2), q(0)), q(1, 2));
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(triviality_failure(q(2, 7), grid(rng, 1 + static_cast<long>(rng() % 1000))), q(2, 7));
    }
    EXPECT_THROW(triviality_failure(q(1), q(1, 2)), InvalidMeasure);
    EXPECT_THROW(triviality_failure(q(0), q(1, 2)), InvalidMeasure);
}

TEST(ContinuumConsequence, ChainsPremisesToConclusion)
{
    for (const auto& m0 : {q(1, 3), q(999, 1000)}) {
        const auto report = theorem7_consequence_report(m0, 100);
        EXPECT_EQ(report.identity_pairs_checked, 100U);
        EXPECT_TRUE(report.identity_all_exact);
        EXPECT_EQ(report.triviality_failure_value, m0);
        EXPECT_TRUE(report.premises_hold());
        EXPECT_EQ(report.conclusion, "no measurable iterated rcd exists");
    }
    EXPECT_THROW(theorem7_consequence_report(q(1)), InvalidMeasure);
}

TEST(DiscretizationStudy, EveryLevelIsConditionallyTrivial)
{
    const auto rows = discretization_study(q(1, 3), {1, 2, 8, 64});
    ASSERT_EQ(rows.size(), 4U);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.conditionally_trivial) << "N=" << r.bins;
    }
    // Independent check at N = 2: every conditional row is trivial on the
    // bin-pair partition.
    const FiniteSpace space(4);
    const auto rho = rcdlab::testing::measure({"1/6", "1/3", "1/6", "1/3"});
    const auto g = make_partition(space, {{0, 1}, {2, 3}});
    const auto k = compute_rcd(rho, g);
    for (Point x = 0; x < 4; ++x) {
        EXPECT_TRUE(oracle::exhaustive_trivial(k.row(x), g));
    }
}
