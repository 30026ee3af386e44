#pragma once

// Iterated rcds: maps (x, y) -> measure whose x-sections are rcds of rho^G(x)
// given G, together with the product-space machinery used to relate them to
// conditional triviality.

#include "rcdlab/rcd_engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rcdlab {

/// Subset of X x X stored as an n*n membership mask (row-major in x).
class ProductEvent {
public:
    explicit ProductEvent(const FiniteSpace& space);
    ProductEvent(const FiniteSpace& space, const std::vector<std::pair<Point, Point>>& pairs);

    static ProductEvent full(const FiniteSpace& space);
    static ProductEvent diagonal(const FiniteSpace& space);
    static ProductEvent off_diagonal(const FiniteSpace& space);
    static ProductEvent rectangle(const Event& left, const Event& right);

    const FiniteSpace& space() const noexcept { return space_; }
    std::size_t side() const noexcept { return space_.size(); }
    bool contains(Point x, Point y) const { return mask_.at(index(x, y)) != 0; }
    void set(Point x, Point y, bool member = true) { mask_.at(index(x, y)) = member ? 1 : 0; }
    std::size_t count() const;

    bool includes(const ProductEvent& other) const;
    ProductEvent intersect(const ProductEvent& other) const;

    friend bool operator==(const ProductEvent&, const ProductEvent&) = default;

private:
    std::size_t index(Point x, Point y) const { return x * space_.size() + y; }

    FiniteSpace space_;
    std::vector<unsigned char> mask_;
};

/// grid(x, y) is a probability measure on the same space.
class IteratedKernel {
public:
    /// Throws SpaceMismatch unless grid is n x n with measures on n points.
    explicit IteratedKernel(std::vector<std::vector<RationalMeasure>> grid);

    /// (x, y) -> k(x), the constant-in-y extension of a kernel.
    static IteratedKernel from_kernel_rows(const Kernel& k);

    std::size_t size() const noexcept { return grid_.size(); }
    const RationalMeasure& at(Point x, Point y) const { return grid_.at(x).at(y); }
    /// The kernel y -> grid(x, y).
    Kernel section(Point x) const { return Kernel(grid_.at(x)); }

    IteratedKernel with_entry(Point x, Point y, RationalMeasure replacement) const;
    IteratedKernel with_section(Point x, const Kernel& k) const;

private:
    std::vector<std::vector<RationalMeasure>> grid_;
};

/// Indicator of e constant on every rectangle (left block) x (right block).
/// With right = singletons this decides membership in G (x) Sigma.
bool in_product_sigma(const ProductEvent& e, const FinitePartition& left, const FinitePartition& right);

/// rho({x : (x, x) in e}).
Rational lemma3_lhs(const ProductEvent& e, const RationalMeasure& rho);

/// sum_x rho({x}) sum_y 1_e(x, y) k(x)({y}).
Rational lemma3_rhs(const ProductEvent& e, const Kernel& k, const RationalMeasure& rho);

/// Section x is compute_rcd(compute_rcd(rho, g).row(x), g).
IteratedKernel build_iterated(const RationalMeasure& rho, const FinitePartition& g);

/// Every section at a rho-positive x is an rcd of rho^G(x) given g.
bool check_iterated(const IteratedKernel& k2, const RationalMeasure& rho, const FinitePartition& g);

/// Constant on every rectangle (block of g) x (block of g).
bool is_product_measurable(const IteratedKernel& k2, const FinitePartition& g);

/// {(x, y) : grid(x, y)({a}) == grid(x, x)({a})}.
ProductEvent agreement_set_at(const IteratedKernel& k2, Point a);

/// {(x, y) : grid(x, y) == grid(x, x)}; always contains the diagonal.
ProductEvent diagonal_agreement_set(const IteratedKernel& k2);

struct ForwardVerdict {
    bool applicable = false; // hypothesis: conditional triviality
    bool witness_is_iterated_rcd = false;
    bool witness_measurable = false;

    bool passed() const noexcept { return !applicable || (witness_is_iterated_rcd && witness_measurable); }
};

enum class BackwardStatus { NotSupplied, NotApplicable, Checked };

struct BackwardVerdict {
    BackwardStatus status = BackwardStatus::NotSupplied;
    bool candidate_is_iterated_rcd = false;
    bool candidate_measurable = false;
    bool agreement_set_measurable = false;
    std::optional<Rational> diagonal_mass;       // lemma3_rhs of the agreement set
    std::optional<Rational> diagonal_mass_direct; // lemma3_lhs of the agreement set
    bool conditionally_trivial = false;

    bool passed() const noexcept
    {
        return status != BackwardStatus::Checked
               || (agreement_set_measurable && diagonal_mass == 1 && diagonal_mass_direct == 1
                   && conditionally_trivial);
    }
};

struct Theorem7Report {
    bool conditionally_trivial = false;
    ForwardVerdict forward;
    BackwardVerdict backward;

    bool passed() const noexcept { return forward.passed() && backward.passed(); }
};

/// Runs both directions of the equivalence between conditional triviality and
/// the existence of a (G x G)-measurable iterated rcd. Throws
/// InconsistentVerdict if any implication fails.
Theorem7Report theorem7_check(const RationalMeasure& rho, const FinitePartition& g,
                              const std::optional<IteratedKernel>& candidate);

std::string to_string(BackwardStatus status);

} // namespace rcdlab
