#pragma once

// Finite measurable spaces. Sigma is always the power set of {0..n-1}; a
// sub-sigma-algebra is stored as the partition into its atoms, and every
// event of the sub-algebra is a union of blocks.

#include "rcdlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace rcdlab {

using Point = std::size_t;

class FiniteSpace {
public:
    explicit FiniteSpace(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    bool contains(Point x) const noexcept { return x < n_; }

    friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

private:
    std::size_t n_;
};

/// A subset of a finite space, held as a sorted list of distinct indices.
class Event {
public:
    Event(const FiniteSpace& space, std::vector<Point> members);
    Event(const FiniteSpace& space, std::initializer_list<Point> members);

    static Event empty(const FiniteSpace& space);
    static Event full(const FiniteSpace& space);
    static Event singleton(const FiniteSpace& space, Point x);
    /// Bit i of mask selects point i; requires n <= 64.
    static Event from_mask(const FiniteSpace& space, std::uint64_t mask);

    const FiniteSpace& space() const noexcept { return space_; }
    const std::vector<Point>& members() const& noexcept { return members_; }
    std::vector<Point> members() && { return std::move(members_); }
    std::size_t size() const noexcept { return members_.size(); }
    bool is_empty() const noexcept { return members_.empty(); }
    bool contains(Point x) const;

    Event complement() const;
    Event intersect(const Event& other) const;
    Event unite(const Event& other) const;

    friend bool operator==(const Event&, const Event&) = default;

private:
    FiniteSpace space_;
    std::vector<Point> members_;
};

/// Atoms of a sub-sigma-algebra. Blocks are sorted internally and ordered by
/// least element, so two partitions are equal iff they describe the same
/// sub-sigma-algebra.
class FinitePartition {
public:
    const FiniteSpace& space() const noexcept { return space_; }
    const std::vector<std::vector<Point>>& blocks() const noexcept { return blocks_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::size_t block_index_of(Point x) const { return block_of_.at(x); }
    Event block(std::size_t index) const { return Event(space_, blocks_.at(index)); }

    /// Union of the blocks selected by bit b of mask; requires <= 64 blocks.
    Event block_union(std::uint64_t mask) const;

    static FinitePartition singletons(const FiniteSpace& space);
    static FinitePartition trivial(const FiniteSpace& space);

    friend bool operator==(const FinitePartition& a, const FinitePartition& b)
    {
        return a.space_ == b.space_ && a.blocks_ == b.blocks_;
    }

private:
    friend FinitePartition make_partition(const FiniteSpace&, std::vector<std::vector<Point>>);

    FinitePartition(FiniteSpace space, std::vector<std::vector<Point>> blocks, std::vector<std::size_t> block_of);

    FiniteSpace space_;
    std::vector<std::vector<Point>> blocks_;
    std::vector<std::size_t> block_of_;
};

/// Probability measure with exact nonnegative weights summing to one.
class RationalMeasure {
public:
    /// Throws InvalidMeasure unless weights are nonnegative and sum to 1.
    explicit RationalMeasure(std::vector<Rational> weights);

    static RationalMeasure dirac(const FiniteSpace& space, Point x);
    static RationalMeasure uniform(const FiniteSpace& space);
    static RationalMeasure uniform_on(const Event& support);

    FiniteSpace space() const { return FiniteSpace(weights_.size()); }
    std::size_t size() const noexcept { return weights_.size(); }
    const Rational& weight(Point x) const { return weights_.at(x); }
    std::span<const Rational> weights() const noexcept { return weights_; }

    Event support() const;

    friend bool operator==(const RationalMeasure&, const RationalMeasure&) = default;

private:
    std::vector<Rational> weights_;
};

/// Validates and canonicalizes a block family.
/// Throws EmptyBlockError, OverlapError, CoverError (and InvalidMeasure for
/// out-of-range indices).
FinitePartition make_partition(const FiniteSpace& space, std::vector<std::vector<Point>> blocks);

/// Atoms of the sigma-algebra generated by the events: points are grouped by
/// their membership pattern across all events.
FinitePartition generated_partition(const FiniteSpace& space, std::span<const Event> events);

/// True iff e is a union of blocks of part.
bool sigma_contains(const FinitePartition& part, const Event& e);

Event atom_of(const FinitePartition& part, Point x);

Rational mass(const RationalMeasure& mu, const Event& e);

/// mu( . | e ). Throws NullConditioningError when mu(e) == 0.
RationalMeasure condition(const RationalMeasure& mu, const Event& e);

/// True iff mu(G) is 0 or 1 for every G in the sigma-algebra of part, which
/// holds exactly when a single block carries all the mass.
bool is_trivial_on(const RationalMeasure& mu, const FinitePartition& part);

/// Throws SpaceMismatch when the sizes differ.
void require_same_space(std::size_t a, std::size_t b, const char* what);

} // namespace rcdlab
