#pragma once

// Semi-analytic measures on X = [0,1] x {0,1}: piecewise-constant densities
// on each fiber plus finitely many atoms. All masses are exact rationals.
//
// The conditioning sigma-algebra G is generated by fiber-symmetric Borel
// sets B x {0,1} together with every rho-null set. It is represented through
// GEvent: a finite union of intervals B, modified by finite point sets that
// are null for any measure with atomless projection.

#include "rcdlab/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rcdlab::continuum {

struct Interval {
    Rational lo;
    Rational hi;
    bool lo_closed = true;
    bool hi_closed = true;

    static Interval closed(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), true, true}; }
    static Interval open(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), false, false}; }

    bool is_empty() const;
    bool contains(const Rational& x) const;
    Rational length() const;
    Interval intersect(const Interval& other) const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Canonical finite union of disjoint, non-touching intervals inside [0,1],
/// sorted by left endpoint.
class IntervalUnion {
public:
    IntervalUnion() = default;
    /// Clips to [0,1], drops empty pieces and merges overlapping or touching
    /// ones.
    explicit IntervalUnion(std::vector<Interval> pieces);

    static IntervalUnion unit() { return IntervalUnion({Interval::closed(0, 1)}); }

    const std::vector<Interval>& pieces() const noexcept { return pieces_; }
    bool is_empty() const noexcept { return pieces_.empty(); }
    bool contains(const Rational& x) const;
    Rational length() const;
    IntervalUnion intersect(const IntervalUnion& other) const;
    IntervalUnion unite(const IntervalUnion& other) const;

    friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

private:
    std::vector<Interval> pieces_;
};

/// Piecewise-constant nonnegative density on [0,1]: value[j] on
/// (breaks[j], breaks[j+1]) with breaks[0] = 0 and breaks.back() = 1.
class PiecewiseDensity {
public:
    PiecewiseDensity(std::vector<Rational> breaks, std::vector<Rational> values);

    static PiecewiseDensity constant(const Rational& value);
    static PiecewiseDensity zero() { return constant(0); }

    const std::vector<Rational>& breaks() const noexcept { return breaks_; }
    const std::vector<Rational>& values() const noexcept { return values_; }

    /// Density value on the open piece containing x (right-continuous at
    /// breakpoints; the last piece at x = 1).
    const Rational& value_at(const Rational& x) const;
    Rational integrate(const IntervalUnion& set) const;
    Rational total() const { return integrate(IntervalUnion::unit()); }

private:
    std::vector<Rational> breaks_;
    std::vector<Rational> values_;
};

struct FiberPoint {
    Rational x;
    int fiber = 0;

    friend bool operator==(const FiberPoint&, const FiberPoint&) = default;
    friend bool operator<(const FiberPoint& a, const FiberPoint& b)
    {
        return a.x != b.x ? a.x < b.x : a.fiber < b.fiber;
    }
};

struct WeightedAtom {
    FiberPoint at;
    Rational weight;
};

/// Probability measure on [0,1] x {0,1}: one density per fiber plus atoms.
class HybridMeasure {
public:
    /// Throws InvalidMeasure unless total mass is exactly 1, weights are
    /// positive and atom locations are distinct and inside X.
    HybridMeasure(PiecewiseDensity fiber0, PiecewiseDensity fiber1, std::vector<WeightedAtom> atoms);

    /// Lebesgue measure times m, where m(0) = m0.
    static HybridMeasure lebesgue_times(const Rational& m0);
    /// delta_x times m.
    static HybridMeasure dirac_times(const Rational& x, const Rational& m0);

    const PiecewiseDensity& density(int fiber) const { return fiber == 0 ? fiber0_ : fiber1_; }
    const std::vector<WeightedAtom>& atoms() const noexcept { return atoms_; }
    bool has_atom_at(const Rational& x) const;

private:
    PiecewiseDensity fiber0_;
    PiecewiseDensity fiber1_;
    std::vector<WeightedAtom> atoms_;
};

struct FiberSet {
    bool zero = false;
    bool one = false;

    bool contains(int fiber) const { return fiber == 0 ? zero : one; }
    friend bool operator==(const FiberSet&, const FiberSet&) = default;
};

/// Finite union of sets I x S. Stored canonically as one interval union per
/// fiber, which makes the pieces disjoint.
class RectEvent {
public:
    RectEvent() = default;
    explicit RectEvent(const std::vector<std::pair<Interval, FiberSet>>& pieces);

    static RectEvent rect(const Interval& i, FiberSet s) { return RectEvent({{i, s}}); }

    const IntervalUnion& fiber(int i) const { return i == 0 ? fiber0_ : fiber1_; }
    bool contains(const FiberPoint& p) const { return fiber(p.fiber).contains(p.x); }

private:
    IntervalUnion fiber0_;
    IntervalUnion fiber1_;
};

/// (base x {0,1}) with finitely many points added outside it and removed
/// from inside it.
class GEvent {
public:
    /// Throws InvalidMeasure if an added point lies in base x {0,1} or a
    /// removed point lies outside it.
    GEvent(IntervalUnion base, std::vector<FiberPoint> added_null = {}, std::vector<FiberPoint> removed_null = {});

    static GEvent full() { return GEvent(IntervalUnion::unit()); }
    static GEvent point(const FiberPoint& p) { return GEvent(IntervalUnion(), {p}); }

    const IntervalUnion& base() const noexcept { return base_; }
    const std::vector<FiberPoint>& added_null() const noexcept { return added_; }
    const std::vector<FiberPoint>& removed_null() const noexcept { return removed_; }
    bool contains(const FiberPoint& p) const;

private:
    IntervalUnion base_;
    std::vector<FiberPoint> added_;
    std::vector<FiberPoint> removed_;
};

Rational hybrid_mass(const HybridMeasure& mu, const RectEvent& e);
Rational hybrid_mass(const HybridMeasure& mu, const GEvent& e);
/// mu(A n G).
Rational hybrid_mass(const HybridMeasure& mu, const RectEvent& a, const GEvent& g);

/// (x, i) -> delta_x (x) m with m(0) = m0 in (0,1).
class DiracProductKernel {
public:
    /// Throws InvalidMeasure unless 0 < m0 < 1.
    explicit DiracProductKernel(Rational m0);

    const Rational& m0() const noexcept { return m0_; }
    Rational m1() const { return 1 - m0_; }
    HybridMeasure measure_at(const Rational& x) const { return HybridMeasure::dirac_times(x, m0_); }
    /// (delta_x (x) m)(A), without building the measure.
    Rational value(const Rational& x, const RectEvent& a) const;

private:
    Rational m0_;
};

/// Integral over G of k(x, i)(A) against rho, evaluated cell by cell between
/// the breakpoints of rho, G and A, plus the atoms of rho inside G.
Rational integrate_kernel(const HybridMeasure& rho, const DiracProductKernel& k, const GEvent& g, const RectEvent& a);

/// Returns true, or throws AtomlessViolation if rho has an atom above x.
bool singleton_is_null(const HybridMeasure& rho, const Rational& x);

struct IdentityPair {
    std::size_t g_index = 0;
    std::size_t a_index = 0;
    Rational lhs;
    Rational rhs;

    bool exact() const { return lhs == rhs; }
};

struct Remark5IdentityReport {
    Rational m0;
    std::size_t pairs_checked = 0;
    bool all_exact = true;
    std::vector<IdentityPair> pairs;
};

/// With rho = Lebesgue (x) m and kernel (x, i) -> delta_x (x) m, compares
/// rho(A n G) with the integral of the kernel over G, for every G x A pair.
Remark5IdentityReport remark5_identity_check(const Rational& m0, const std::vector<GEvent>& g_events,
                                             const std::vector<RectEvent>& a_events);

struct EventBattery {
    std::vector<GEvent> g_events;
    std::vector<RectEvent> a_events;

    std::size_t pair_count() const noexcept { return g_events.size() * a_events.size(); }
};

/// Deterministic battery with exactly `pairs` (G, A) combinations. Interval
/// endpoints lie on the grid k/400; G events include point-modified variants.
EventBattery standard_battery(std::size_t pairs, std::uint64_t seed = 0);

/// Mass that delta_x (x) m assigns to the G-event {(x, 0)}; must equal m0.
/// Throws InconsistentVerdict if the value is not strictly inside (0,1).
Rational triviality_failure(const Rational& m0, const Rational& x);

struct Theorem7ConsequenceReport {
    Rational m0;
    std::size_t identity_pairs_checked = 0;
    bool identity_all_exact = false;
    Rational triviality_failure_value;
    bool triviality_fails = false;
    std::string conclusion;

    bool premises_hold() const noexcept { return identity_all_exact && triviality_fails; }
};

Theorem7ConsequenceReport theorem7_consequence_report(const Rational& m0, std::size_t pairs = 2500,
                                                      std::uint64_t seed = 0);

struct DiscretizationRow {
    std::size_t bins = 0;
    bool conditionally_trivial = false;
};

/// For each N: 2N points (bin k, fiber i) -> 2k + i, uniform bins times m,
/// conditioned on the bin-pair partition.
std::vector<DiscretizationRow> discretization_study(const Rational& m0, const std::vector<std::size_t>& levels);

} // namespace rcdlab::continuum
