#include "rcdlab/continuum.hpp"

#include "rcdlab/errors.hpp"
#include "rcdlab/measurable.hpp"
#include "rcdlab/rcd_engine.hpp"

#include <algorithm>
#include <random>

namespace rcdlab::continuum {

// ---------------------------------------------------------------------------
// Interval

bool Interval::is_empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }

bool Interval::contains(const Rational& x) const
{
    const bool above = lo < x || (lo == x && lo_closed);
    const bool below = x < hi || (x == hi && hi_closed);
    return above && below;
}

Rational Interval::length() const { return is_empty() ? Rational(0) : Rational(hi - lo); }

Interval Interval::intersect(const Interval& other) const
{
    Interval out;
    if (lo == other.lo) {
        out.lo = lo;
        out.lo_closed = lo_closed && other.lo_closed;
    } else if (lo > other.lo) {
        out.lo = lo;
        out.lo_closed = lo_closed;
    } else {
        out.lo = other.lo;
        out.lo_closed = other.lo_closed;
    }
    if (hi == other.hi) {
        out.hi = hi;
        out.hi_closed = hi_closed && other.hi_closed;
    } else if (hi < other.hi) {
        out.hi = hi;
        out.hi_closed = hi_closed;
    } else {
        out.hi = other.hi;
        out.hi_closed = other.hi_closed;
    }
    return out;
}

// ---------------------------------------------------------------------------
// IntervalUnion

IntervalUnion::IntervalUnion(std::vector<Interval> pieces)
{
    const Interval unit = Interval::closed(0, 1);
    std::vector<Interval> clipped;
    clipped.reserve(pieces.size());
    for (const auto& p : pieces) {
        Interval c = p.intersect(unit);
        if (!c.is_empty()) {
            clipped.push_back(std::move(c));
        }
    }
    std::sort(clipped.begin(), clipped.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) {
            return a.lo < b.lo;
        }
        return a.lo_closed && !b.lo_closed;
    });
    for (auto& next : clipped) {
        if (!pieces_.empty()) {
            Interval& cur = pieces_.back();
            const bool joins = next.lo < cur.hi || (next.lo == cur.hi && (cur.hi_closed || next.lo_closed));
            if (joins) {
                if (next.hi > cur.hi) {
                    cur.hi = next.hi;
                    cur.hi_closed = next.hi_closed;
                } else if (next.hi == cur.hi) {
                    cur.hi_closed = cur.hi_closed || next.hi_closed;
                }
                continue;
            }
        }
        pieces_.push_back(std::move(next));
    }
}

bool IntervalUnion::contains(const Rational& x) const
{
    return std::any_of(pieces_.begin(), pieces_.end(), [&](const Interval& p) { return p.contains(x); });
}

Rational IntervalUnion::length() const
{
    Rational total = 0;
    for (const auto& p : pieces_) {
        total += p.length();
    }
    return total;
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& other) const
{
    std::vector<Interval> out;
    for (const auto& a : pieces_) {
        for (const auto& b : other.pieces_) {
            out.push_back(a.intersect(b));
        }
    }
    return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const
{
    std::vector<Interval> out = pieces_;
    out.insert(out.end(), other.pieces_.begin(), other.pieces_.end());
    return IntervalUnion(std::move(out));
}

// ---------------------------------------------------------------------------
// PiecewiseDensity

PiecewiseDensity::PiecewiseDensity(std::vector<Rational> breaks, std::vector<Rational> values)
    : breaks_(std::move(breaks)), values_(std::move(values))
{
    if (breaks_.size() < 2 || breaks_.front() != 0 || breaks_.back() != 1) {
        throw InvalidMeasure("density breakpoints must run from 0 to 1");
    }
    if (values_.size() + 1 != breaks_.size()) {
        throw InvalidMeasure("density needs one value per piece");
    }
    for (std::size_t j = 0; j + 1 < breaks_.size(); ++j) {
        if (!(breaks_[j] < breaks_[j + 1])) {
            throw InvalidMeasure("density breakpoints must be strictly increasing");
        }
        if (sgn(values_[j]) < 0) {
            throw InvalidMeasure("negative density value");
        }
    }
}

PiecewiseDensity PiecewiseDensity::constant(const Rational& value)
{
    return PiecewiseDensity({Rational(0), Rational(1)}, {value});
}

const Rational& PiecewiseDensity::value_at(const Rational& x) const
{
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t j = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return values_[std::min(j, values_.size() - 1)];
}

Rational PiecewiseDensity::integrate(const IntervalUnion& set) const
{
    Rational total = 0;
    for (const auto& piece : set.pieces()) {
        for (std::size_t j = 0; j < values_.size(); ++j) {
            if (sgn(values_[j]) == 0) {
                continue;
            }
            total += values_[j] * piece.intersect(Interval::closed(breaks_[j], breaks_[j + 1])).length();
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// HybridMeasure

namespace {

void require_point(const FiberPoint& p)
{
    if (p.x < 0 || p.x > 1 || (p.fiber != 0 && p.fiber != 1)) {
        throw InvalidMeasure("point (" + to_string(p.x) + ", " + std::to_string(p.fiber) + ") outside X");
    }
}

std::vector<FiberPoint> sorted_unique(std::vector<FiberPoint> points)
{
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

} // namespace

HybridMeasure::HybridMeasure(PiecewiseDensity fiber0, PiecewiseDensity fiber1, std::vector<WeightedAtom> atoms)
    : fiber0_(std::move(fiber0)), fiber1_(std::move(fiber1)), atoms_(std::move(atoms))
{
    Rational total = fiber0_.total() + fiber1_.total();
    for (auto& a : atoms_) {
        require_point(a.at);
        a.weight.canonicalize();
        if (sgn(a.weight) <= 0) {
            throw InvalidMeasure("atom weights must be positive");
        }
        total += a.weight;
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
    for (std::size_t i = 1; i < atoms_.size(); ++i) {
        if (atoms_[i].at == atoms_[i - 1].at) {
            throw InvalidMeasure("duplicate atom location");
        }
    }
    if (total != 1) {
        throw InvalidMeasure("hybrid measure has total mass " + to_string(total));
    }
}

HybridMeasure HybridMeasure::lebesgue_times(const Rational& m0)
{
    return HybridMeasure(PiecewiseDensity::constant(m0), PiecewiseDensity::constant(1 - m0), {});
}

HybridMeasure HybridMeasure::dirac_times(const Rational& x, const Rational& m0)
{
    std::vector<WeightedAtom> atoms;
    if (sgn(m0) > 0) {
        atoms.push_back({{x, 0}, m0});
    }
    if (m0 < 1) {
        atoms.push_back({{x, 1}, 1 - m0});
    }
    return HybridMeasure(PiecewiseDensity::zero(), PiecewiseDensity::zero(), std::move(atoms));
}

bool HybridMeasure::has_atom_at(const Rational& x) const
{
    return std::any_of(atoms_.begin(), atoms_.end(), [&](const WeightedAtom& a) { return a.at.x == x; });
}

// ---------------------------------------------------------------------------
// Events

RectEvent::RectEvent(const std::vector<std::pair<Interval, FiberSet>>& pieces)
{
    std::vector<Interval> zero;
    std::vector<Interval> one;
    for (const auto& [interval, fibers] : pieces) {
        if (fibers.zero) {
            zero.push_back(interval);
        }
        if (fibers.one) {
            one.push_back(interval);
        }
    }
    fiber0_ = IntervalUnion(std::move(zero));
    fiber1_ = IntervalUnion(std::move(one));
}

GEvent::GEvent(IntervalUnion base, std::vector<FiberPoint> added_null, std::vector<FiberPoint> removed_null)
    : base_(std::move(base)), added_(sorted_unique(std::move(added_null))), removed_(sorted_unique(std::move(removed_null)))
{
    for (const auto& p : added_) {
        require_point(p);
        if (base_.contains(p.x)) {
            throw InvalidMeasure("added point " + to_string(p.x) + " already lies in the base");
        }
    }
    for (const auto& p : removed_) {
        require_point(p);
        if (!base_.contains(p.x)) {
            throw InvalidMeasure("removed point " + to_string(p.x) + " lies outside the base");
        }
    }
}

bool GEvent::contains(const FiberPoint& p) const
{
    if (std::binary_search(added_.begin(), added_.end(), p)) {
        return true;
    }
    return base_.contains(p.x) && !std::binary_search(removed_.begin(), removed_.end(), p);
}

// ---------------------------------------------------------------------------
// Masses

Rational hybrid_mass(const HybridMeasure& mu, const RectEvent& e)
{
    Rational total = mu.density(0).integrate(e.fiber(0)) + mu.density(1).integrate(e.fiber(1));
    for (const auto& a : mu.atoms()) {
        if (e.contains(a.at)) {
            total += a.weight;
        }
    }
    return total;
}

Rational hybrid_mass(const HybridMeasure& mu, const GEvent& e)
{
    // Point modifications have Lebesgue measure zero; they matter only
    // through atoms.
    Rational total = mu.density(0).integrate(e.base()) + mu.density(1).integrate(e.base());
    for (const auto& a : mu.atoms()) {
        if (e.contains(a.at)) {
            total += a.weight;
        }
    }
    return total;
}

Rational hybrid_mass(const HybridMeasure& mu, const RectEvent& a, const GEvent& g)
{
    Rational total = mu.density(0).integrate(a.fiber(0).intersect(g.base()))
                     + mu.density(1).integrate(a.fiber(1).intersect(g.base()));
    for (const auto& atom : mu.atoms()) {
        if (a.contains(atom.at) && g.contains(atom.at)) {
            total += atom.weight;
        }
    }
    return total;
}

DiracProductKernel::DiracProductKernel(Rational m0) : m0_(std::move(m0))
{
    m0_.canonicalize();
    if (!(sgn(m0_) > 0 && m0_ < 1)) {
        throw InvalidMeasure("m0 = " + to_string(m0_) + " gives a Dirac measure on {0,1}; need 0 < m0 < 1");
    }
}

Rational DiracProductKernel::value(const Rational& x, const RectEvent& a) const
{
    Rational v = 0;
    if (a.fiber(0).contains(x)) {
        v += m0_;
    }
    if (a.fiber(1).contains(x)) {
        v += m1();
    }
    return v;
}

Rational integrate_kernel(const HybridMeasure& rho, const DiracProductKernel& k, const GEvent& g, const RectEvent& a)
{
    std::vector<Rational> cuts{Rational(0), Rational(1)};
    auto add_endpoints = [&](const IntervalUnion& u) {
        for (const auto& p : u.pieces()) {
            cuts.push_back(p.lo);
            cuts.push_back(p.hi);
        }
    };
    for (int i = 0; i < 2; ++i) {
        const auto& br = rho.density(i).breaks();
        cuts.insert(cuts.end(), br.begin(), br.end());
        add_endpoints(a.fiber(i));
    }
    add_endpoints(g.base());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // On each open cell the integrand, both densities and the indicator of
    // the base are constant; cell boundaries are Lebesgue-null.
    Rational total = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const Rational mid = (cuts[j] + cuts[j + 1]) / 2;
        if (!g.base().contains(mid)) {
            continue;
        }
        const Rational integrand = k.value(mid, a);
        if (sgn(integrand) == 0) {
            continue;
        }
        const Rational width = cuts[j + 1] - cuts[j];
        total += integrand * (rho.density(0).value_at(mid) + rho.density(1).value_at(mid)) * width;
    }
    for (const auto& atom : rho.atoms()) {
        if (g.contains(atom.at)) {
            total += atom.weight * k.value(atom.at.x, a);
        }
    }
    return total;
}

bool singleton_is_null(const HybridMeasure& rho, const Rational& x)
{
    if (rho.has_atom_at(x)) {
        throw AtomlessViolation("measure has an atom above x = " + to_string(x));
    }
    return true;
}

// ---------------------------------------------------------------------------
// Identity battery

Remark5IdentityReport remark5_identity_check(const Rational& m0, const std::vector<GEvent>& g_events,
                                             const std::vector<RectEvent>& a_events)
{
    const DiracProductKernel kernel(m0);
    const HybridMeasure rho = HybridMeasure::lebesgue_times(kernel.m0());
    Remark5IdentityReport report;
    report.m0 = kernel.m0();
    report.pairs.reserve(g_events.size() * a_events.size());
    for (std::size_t gi = 0; gi < g_events.size(); ++gi) {
        for (std::size_t ai = 0; ai < a_events.size(); ++ai) {
            IdentityPair pair{gi, ai, hybrid_mass(rho, a_events[ai], g_events[gi]),
                              integrate_kernel(rho, kernel, g_events[gi], a_events[ai])};
            report.all_exact = report.all_exact && pair.exact();
            report.pairs.push_back(std::move(pair));
        }
    }
    report.pairs_checked = report.pairs.size();
    return report;
}

namespace {

constexpr long grid_den = 400;

class BatteryGenerator {
public:
    explicit BatteryGenerator(std::uint64_t seed) : rng_(seed) {}

    Rational grid_point() { return make_rational(pick(0, grid_den), grid_den); }

    Interval interval()
    {
        long a = pick(0, grid_den);
        long b = pick(0, grid_den);
        if (a > b) {
            std::swap(a, b);
        }
        if (a == b) {
            b = std::min(grid_den, b + 1);
            a = b - 1;
        }
        return {make_rational(a, grid_den), make_rational(b, grid_den), coin(), coin()};
    }

    FiberSet fibers()
    {
        switch (pick(0, 3)) {
        case 0:
            return {true, false};
        case 1:
            return {false, true};
        case 2:
            return {true, true};
        default:
            return {false, false};
        }
    }

    GEvent g_event()
    {
        std::vector<Interval> pieces{interval()};
        if (pick(0, 2) == 0) {
            pieces.push_back(interval());
        }
        IntervalUnion base(std::move(pieces));
        if (pick(0, 2) != 0) {
            return GEvent(std::move(base));
        }
        std::vector<FiberPoint> added;
        std::vector<FiberPoint> removed;
        for (int t = 0; t < 4; ++t) {
            // Off-grid points so the modification never sits on an endpoint.
            const Rational x = make_rational(pick(0, 997), 997);
            const FiberPoint p{x, static_cast<int>(pick(0, 1))};
            (base.contains(x) ? removed : added).push_back(p);
        }
        return GEvent(std::move(base), std::move(added), std::move(removed));
    }

    RectEvent a_event()
    {
        std::vector<std::pair<Interval, FiberSet>> pieces{{interval(), fibers()}};
        if (pick(0, 3) == 0) {
            pieces.emplace_back(interval(), fibers());
        }
        return RectEvent(pieces);
    }

private:
    long pick(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool coin() { return pick(0, 1) == 1; }

    std::mt19937_64 rng_;
};

} // namespace

EventBattery standard_battery(std::size_t pairs, std::uint64_t seed)
{
    EventBattery battery;
    if (pairs == 0) {
        return battery;
    }
    std::size_t g_count = 1;
    for (std::size_t d = 1; d * d <= pairs; ++d) {
        if (pairs % d == 0) {
            g_count = d;
        }
    }
    const std::size_t a_count = pairs / g_count;

    // Fixed anchors first, then seeded random events.
    const std::vector<GEvent> g_anchors{
        GEvent(IntervalUnion({Interval::closed(make_rational(1, 4), make_rational(3, 4))})),
        GEvent::full(),
        GEvent(IntervalUnion({Interval::closed(make_rational(1, 4), make_rational(3, 4))}),
               {{make_rational(1, 8), 0}, {make_rational(7, 8), 1}}, {{make_rational(1, 2), 0}}),
    };
    const std::vector<RectEvent> a_anchors{
        RectEvent::rect(Interval::closed(0, make_rational(1, 2)), {true, false}),
        RectEvent::rect(Interval::closed(0, 1), {true, true}),
    };
    BatteryGenerator gen(seed);
    for (std::size_t i = 0; i < g_count; ++i) {
        battery.g_events.push_back(i < g_anchors.size() ? g_anchors[i] : gen.g_event());
    }
    for (std::size_t i = 0; i < a_count; ++i) {
        battery.a_events.push_back(i < a_anchors.size() ? a_anchors[i] : gen.a_event());
    }
    return battery;
}

Rational triviality_failure(const Rational& m0, const Rational& x)
{
    const DiracProductKernel kernel(m0);
    const FiberPoint site{x, 0};
    require_point(site);
    // {(x, 0)} belongs to G because it is null for the atomless rho.
    singleton_is_null(HybridMeasure::lebesgue_times(kernel.m0()), x);
    Rational value = hybrid_mass(kernel.measure_at(x), GEvent::point(site));
    if (!(sgn(value) > 0 && value < 1)) {
        throw InconsistentVerdict("delta_x (x) m gives the G-event {(x,0)} mass " + to_string(value));
    }
    return value;
}

Theorem7ConsequenceReport theorem7_consequence_report(const Rational& m0, std::size_t pairs, std::uint64_t seed)
{
    const DiracProductKernel kernel(m0);
    const auto battery = standard_battery(pairs, seed);
    const auto identity = remark5_identity_check(kernel.m0(), battery.g_events, battery.a_events);

    Theorem7ConsequenceReport report;
    report.m0 = kernel.m0();
    report.identity_pairs_checked = identity.pairs_checked;
    report.identity_all_exact = identity.all_exact && identity.pairs_checked > 0;
    report.triviality_failure_value = triviality_failure(kernel.m0(), make_rational(1, 2));
    report.triviality_fails = true;
    report.conclusion = report.premises_hold() ? "no measurable iterated rcd exists" : "premises not established";
    return report;
}

std::vector<DiscretizationRow> discretization_study(const Rational& m0, const std::vector<std::size_t>& levels)
{
    const DiracProductKernel kernel(m0);
    std::vector<DiscretizationRow> rows;
    rows.reserve(levels.size());
    for (std::size_t bins : levels) {
        if (bins == 0) {
            throw InvalidMeasure("discretization level must be positive");
        }
        const FiniteSpace space(2 * bins);
        std::vector<Rational> weights(2 * bins);
        std::vector<std::vector<Point>> blocks(bins);
        const Rational w0 = kernel.m0() / static_cast<unsigned long>(bins);
        const Rational w1 = kernel.m1() / static_cast<unsigned long>(bins);
        for (std::size_t k = 0; k < bins; ++k) {
            weights[2 * k] = w0;
            weights[2 * k + 1] = w1;
            blocks[k] = {2 * k, 2 * k + 1};
        }
        const RationalMeasure rho(std::move(weights));
        rows.push_back({bins, conditional_triviality(rho, make_partition(space, std::move(blocks)))});
    }
    return rows;
}

} // namespace rcdlab::continuum
