#pragma once

#include "rcdlab/measurable.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace rcdlab {

/// A map from points to probability measures; row x is the measure attached
/// to x. Measurability against a partition is a property checked separately.
class Kernel {
public:
    explicit Kernel(std::vector<RationalMeasure> rows);

    /// The kernel x -> mu for every x.
    static Kernel constant(const RationalMeasure& mu);

    std::size_t size() const noexcept { return rows_.size(); }
    const RationalMeasure& row(Point x) const { return rows_.at(x); }
    const std::vector<RationalMeasure>& rows() const noexcept { return rows_; }

    /// Copy with row x replaced.
    Kernel with_row(Point x, RationalMeasure replacement) const;

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    std::vector<RationalMeasure> rows_;
};

/// First (A, G) pair at which rho(A n G) and the integral of k(.)(A) over G
/// disagree.
struct RcdWitness {
    Event a;
    Event g;
    Rational lhs;
    Rational rhs;
};

struct RcdReport {
    bool measurable = false;
    bool identity_holds = false;
    std::optional<RcdWitness> failing_witness;

    bool passed() const noexcept { return measurable && identity_holds; }
};

struct Remark2Verdict {
    bool trivial = false;            // G is rho-trivial
    bool constant_map_is_rcd = false; // x -> rho is an rcd of rho given G
    bool rcd_almost_constant = false; // rho^G is rho-almost constant

    bool coherent() const noexcept
    {
        return trivial == constant_map_is_rcd && constant_map_is_rcd == rcd_almost_constant;
    }
};

/// Rows identical (exactly) within every block of g.
bool is_g_measurable(const Kernel& k, const FinitePartition& g);

/// Conditions rho on the atom of each point; rho-null atoms receive rho.
Kernel compute_rcd(const RationalMeasure& rho, const FinitePartition& g);

/// Checks rho(A n G) == sum_{x in G} k(x)(A) rho({x}) on singletons A and
/// blocks G. Both sides are additive in A and G, so this covers every event
/// of Sigma and every event of the sub-algebra.
RcdReport check_rcd(const Kernel& k, const RationalMeasure& rho, const FinitePartition& g);

/// Rows agree at every point of positive rho-mass.
bool essentially_equal(const Kernel& k1, const Kernel& k2, const RationalMeasure& rho);

/// Rows agree at every point of positive rho-mass.
bool is_almost_constant(const Kernel& k, const RationalMeasure& rho);

Remark2Verdict remark2_equivalence(const RationalMeasure& rho, const FinitePartition& g);

/// G is trivial under rho^G(x) for every x of positive rho-mass.
bool conditional_triviality(const RationalMeasure& rho, const FinitePartition& g);

/// A single rule (mu, x) -> measure that is an rcd of every mu given g.
class UniversalConditioner {
public:
    explicit UniversalConditioner(FinitePartition g) : g_(std::move(g)) {}

    RationalMeasure operator()(const RationalMeasure& mu, Point x) const;

    /// Rows x -> C(mu, x) assembled into a kernel.
    Kernel kernel_for(const RationalMeasure& mu) const;

    const FinitePartition& partition() const noexcept { return g_; }

private:
    FinitePartition g_;
};

UniversalConditioner universal_conditioner(const FinitePartition& g);

} // namespace rcdlab
