#include "rcdlab/measurable.hpp"

#include "rcdlab/errors.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace rcdlab {

void require_same_space(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw SpaceMismatch(std::string(what) + ": spaces of size " + std::to_string(a) + " and "
                            + std::to_string(b));
    }
}

FiniteSpace::FiniteSpace(std::size_t n) : n_(n)
{
    if (n == 0) {
        throw InvalidMeasure("finite space needs at least one point");
    }
}

// ---------------------------------------------------------------------------
// Event

Event::Event(const FiniteSpace& space, std::vector<Point> members) : space_(space), members_(std::move(members))
{
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.back() >= space_.size()) {
        throw InvalidMeasure("event member " + std::to_string(members_.back()) + " outside space of size "
                             + std::to_string(space_.size()));
    }
}

Event::Event(const FiniteSpace& space, std::initializer_list<Point> members)
    : Event(space, std::vector<Point>(members))
{
}

Event Event::empty(const FiniteSpace& space) { return Event(space, std::vector<Point>{}); }

Event Event::full(const FiniteSpace& space)
{
    std::vector<Point> all(space.size());
    for (Point x = 0; x < all.size(); ++x) {
        all[x] = x;
    }
    return Event(space, std::move(all));
}

Event Event::singleton(const FiniteSpace& space, Point x) { return Event(space, std::vector<Point>{x}); }

Event Event::from_mask(const FiniteSpace& space, std::uint64_t mask)
{
    std::vector<Point> members;
    for (Point x = 0; x < space.size() && x < 64; ++x) {
        if ((mask >> x) & 1U) {
            members.push_back(x);
        }
    }
    return Event(space, std::move(members));
}

bool Event::contains(Point x) const { return std::binary_search(members_.begin(), members_.end(), x); }

Event Event::complement() const
{
    std::vector<Point> out;
    out.reserve(space_.size() - members_.size());
    auto it = members_.begin();
    for (Point x = 0; x < space_.size(); ++x) {
        if (it != members_.end() && *it == x) {
            ++it;
        } else {
            out.push_back(x);
        }
    }
    return Event(space_, std::move(out));
}

Event Event::intersect(const Event& other) const
{
    require_same_space(space_.size(), other.space_.size(), "event intersection");
    std::vector<Point> out;
    std::set_intersection(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                          std::back_inserter(out));
    return Event(space_, std::move(out));
}

Event Event::unite(const Event& other) const
{
    require_same_space(space_.size(), other.space_.size(), "event union");
    std::vector<Point> out;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                   std::back_inserter(out));
    return Event(space_, std::move(out));
}

// ---------------------------------------------------------------------------
// FinitePartition

FinitePartition::FinitePartition(FiniteSpace space, std::vector<std::vector<Point>> blocks,
                                 std::vector<std::size_t> block_of)
    : space_(space), blocks_(std::move(blocks)), block_of_(std::move(block_of))
{
}

FinitePartition make_partition(const FiniteSpace& space, std::vector<std::vector<Point>> blocks)
{
    constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> owner(space.size(), unassigned);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto& block = blocks[b];
        if (block.empty()) {
            throw EmptyBlockError("block " + std::to_string(b) + " is empty");
        }
        std::sort(block.begin(), block.end());
        for (std::size_t i = 0; i < block.size(); ++i) {
            const Point x = block[i];
            if (x >= space.size()) {
                throw InvalidMeasure("block member " + std::to_string(x) + " outside space");
            }
            if (owner[x] != unassigned) {
                throw OverlapError("point " + std::to_string(x) + " appears in more than one block");
            }
            owner[x] = b;
        }
    }
    for (Point x = 0; x < space.size(); ++x) {
        if (owner[x] == unassigned) {
            throw CoverError("point " + std::to_string(x) + " is not covered by any block");
        }
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<std::size_t> block_of(space.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (Point x : blocks[b]) {
            block_of[x] = b;
        }
    }
    return FinitePartition(space, std::move(blocks), std::move(block_of));
}

Event FinitePartition::block_union(std::uint64_t mask) const
{
    std::vector<Point> members;
    for (std::size_t b = 0; b < blocks_.size() && b < 64; ++b) {
        if ((mask >> b) & 1U) {
            members.insert(members.end(), blocks_[b].begin(), blocks_[b].end());
        }
    }
    return Event(space_, std::move(members));
}

FinitePartition FinitePartition::singletons(const FiniteSpace& space)
{
    std::vector<std::vector<Point>> blocks(space.size());
    for (Point x = 0; x < space.size(); ++x) {
        blocks[x] = {x};
    }
    return make_partition(space, std::move(blocks));
}

FinitePartition FinitePartition::trivial(const FiniteSpace& space)
{
    return make_partition(space, {Event::full(space).members()});
}

FinitePartition generated_partition(const FiniteSpace& space, std::span<const Event> events)
{
    // Membership pattern of each point across the events identifies its atom.
    std::map<std::vector<bool>, std::vector<Point>> cells;
    for (Point x = 0; x < space.size(); ++x) {
        std::vector<bool> pattern;
        pattern.reserve(events.size());
        for (const auto& e : events) {
            require_same_space(space.size(), e.space().size(), "generated_partition");
            pattern.push_back(e.contains(x));
        }
        cells[pattern].push_back(x);
    }
    std::vector<std::vector<Point>> blocks;
    blocks.reserve(cells.size());
    for (auto& [pattern, members] : cells) {
        blocks.push_back(std::move(members));
    }
    return make_partition(space, std::move(blocks));
}

bool sigma_contains(const FinitePartition& part, const Event& e)
{
    require_same_space(part.space().size(), e.space().size(), "sigma_contains");
    for (const auto& block : part.blocks()) {
        const bool first = e.contains(block.front());
        for (Point x : block) {
            if (e.contains(x) != first) {
                return false;
            }
        }
    }
    return true;
}

Event atom_of(const FinitePartition& part, Point x)
{
    return part.block(part.block_index_of(x));
}

// ---------------------------------------------------------------------------
// RationalMeasure

RationalMeasure::RationalMeasure(std::vector<Rational> weights) : weights_(std::move(weights))
{
    if (weights_.empty()) {
        throw InvalidMeasure("measure on an empty space");
    }
    Rational total = 0;
    for (std::size_t x = 0; x < weights_.size(); ++x) {
        weights_[x].canonicalize();
        if (sgn(weights_[x]) < 0) {
            throw InvalidMeasure("negative weight " + to_string(weights_[x]) + " at point " + std::to_string(x));
        }
        total += weights_[x];
    }
    if (total != 1) {
        throw InvalidMeasure("weights sum to " + to_string(total) + ", expected 1");
    }
}

RationalMeasure RationalMeasure::dirac(const FiniteSpace& space, Point x)
{
    std::vector<Rational> w(space.size());
    w.at(x) = 1;
    return RationalMeasure(std::move(w));
}

RationalMeasure RationalMeasure::uniform(const FiniteSpace& space) { return uniform_on(Event::full(space)); }

RationalMeasure RationalMeasure::uniform_on(const Event& support)
{
    if (support.is_empty()) {
        throw NullConditioningError("uniform measure on an empty event");
    }
    std::vector<Rational> w(support.space().size());
    const Rational share(1, static_cast<unsigned long>(support.size()));
    for (Point x : support.members()) {
        w[x] = share;
    }
    return RationalMeasure(std::move(w));
}

Event RationalMeasure::support() const
{
    std::vector<Point> members;
    for (Point x = 0; x < weights_.size(); ++x) {
        if (sgn(weights_[x]) > 0) {
            members.push_back(x);
        }
    }
    return Event(space(), std::move(members));
}

Rational mass(const RationalMeasure& mu, const Event& e)
{
    require_same_space(mu.size(), e.space().size(), "mass");
    Rational total = 0;
    for (Point x : e.members()) {
        total += mu.weight(x);
    }
    return total;
}

RationalMeasure condition(const RationalMeasure& mu, const Event& e)
{
    const Rational m = mass(mu, e);
    if (sgn(m) == 0) {
        throw NullConditioningError("conditioning on an event of zero mass");
    }
    std::vector<Rational> w(mu.size());
    for (Point x : e.members()) {
        w[x] = mu.weight(x) / m;
    }
    return RationalMeasure(std::move(w));
}

bool is_trivial_on(const RationalMeasure& mu, const FinitePartition& part)
{
    require_same_space(mu.size(), part.space().size(), "is_trivial_on");
    std::vector<Rational> block_mass(part.block_count());
    for (Point x = 0; x < mu.size(); ++x) {
        block_mass[part.block_index_of(x)] += mu.weight(x);
    }
    return std::count(block_mass.begin(), block_mass.end(), Rational(1)) == 1;
}

} // namespace rcdlab
