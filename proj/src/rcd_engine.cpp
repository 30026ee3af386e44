#include "rcdlab/rcd_engine.hpp"

#include "rcdlab/errors.hpp"

namespace rcdlab {

Kernel::Kernel(std::vector<RationalMeasure> rows) : rows_(std::move(rows))
{
    if (rows_.empty()) {
        throw InvalidMeasure("kernel with no rows");
    }
    for (const auto& r : rows_) {
        require_same_space(rows_.size(), r.size(), "kernel row");
    }
}

Kernel Kernel::constant(const RationalMeasure& mu) { return Kernel(std::vector<RationalMeasure>(mu.size(), mu)); }

Kernel Kernel::with_row(Point x, RationalMeasure replacement) const
{
    auto rows = rows_;
    rows.at(x) = std::move(replacement);
    return Kernel(std::move(rows));
}

bool is_g_measurable(const Kernel& k, const FinitePartition& g)
{
    require_same_space(k.size(), g.space().size(), "is_g_measurable");
    for (const auto& block : g.blocks()) {
        const auto& first = k.row(block.front());
        for (Point x : block) {
            if (k.row(x) != first) {
                return false;
            }
        }
    }
    return true;
}

RationalMeasure UniversalConditioner::operator()(const RationalMeasure& mu, Point x) const
{
    require_same_space(mu.size(), g_.space().size(), "universal conditioner");
    const Event atom = atom_of(g_, x);
    if (sgn(mass(mu, atom)) == 0) {
        return mu;
    }
    return condition(mu, atom);
}

Kernel UniversalConditioner::kernel_for(const RationalMeasure& mu) const
{
    require_same_space(mu.size(), g_.space().size(), "universal conditioner");
    // One conditioning per block; rows in a block share it.
    std::vector<RationalMeasure> per_block;
    per_block.reserve(g_.block_count());
    for (std::size_t b = 0; b < g_.block_count(); ++b) {
        per_block.push_back((*this)(mu, g_.blocks()[b].front()));
    }
    std::vector<RationalMeasure> rows;
    rows.reserve(mu.size());
    for (Point x = 0; x < mu.size(); ++x) {
        rows.push_back(per_block[g_.block_index_of(x)]);
    }
    return Kernel(std::move(rows));
}

UniversalConditioner universal_conditioner(const FinitePartition& g) { return UniversalConditioner(g); }

Kernel compute_rcd(const RationalMeasure& rho, const FinitePartition& g)
{
    return universal_conditioner(g).kernel_for(rho);
}

RcdReport check_rcd(const Kernel& k, const RationalMeasure& rho, const FinitePartition& g)
{
    require_same_space(k.size(), rho.size(), "check_rcd");
    require_same_space(k.size(), g.space().size(), "check_rcd");
    RcdReport report;
    report.measurable = is_g_measurable(k, g);
    report.identity_holds = true;
    const FiniteSpace space = rho.space();
    for (std::size_t b = 0; b < g.block_count() && report.identity_holds; ++b) {
        const auto& block = g.blocks()[b];
        for (Point a = 0; a < rho.size(); ++a) {
            // rho({a} n G) is rho({a}) when a lies in the block, else 0.
            Rational lhs = g.block_index_of(a) == b ? rho.weight(a) : Rational(0);
            Rational rhs = 0;
            for (Point x : block) {
                rhs += k.row(x).weight(a) * rho.weight(x);
            }
            if (lhs != rhs) {
                report.identity_holds = false;
                report.failing_witness = RcdWitness{Event::singleton(space, a), Event(space, block), lhs, rhs};
                break;
            }
        }
    }
    return report;
}

bool essentially_equal(const Kernel& k1, const Kernel& k2, const RationalMeasure& rho)
{
    require_same_space(k1.size(), k2.size(), "essentially_equal");
    require_same_space(k1.size(), rho.size(), "essentially_equal");
    for (Point x = 0; x < rho.size(); ++x) {
        if (sgn(rho.weight(x)) > 0 && k1.row(x) != k2.row(x)) {
            return false;
        }
    }
    return true;
}

bool is_almost_constant(const Kernel& k, const RationalMeasure& rho)
{
    require_same_space(k.size(), rho.size(), "is_almost_constant");
    const RationalMeasure* reference = nullptr;
    for (Point x = 0; x < rho.size(); ++x) {
        if (sgn(rho.weight(x)) == 0) {
            continue;
        }
        if (reference == nullptr) {
            reference = &k.row(x);
        } else if (k.row(x) != *reference) {
            return false;
        }
    }
    return true;
}

Remark2Verdict remark2_equivalence(const RationalMeasure& rho, const FinitePartition& g)
{
    Remark2Verdict v;
    v.trivial = is_trivial_on(rho, g);
    v.constant_map_is_rcd = check_rcd(Kernel::constant(rho), rho, g).passed();
    v.rcd_almost_constant = is_almost_constant(compute_rcd(rho, g), rho);
    return v;
}

bool conditional_triviality(const RationalMeasure& rho, const FinitePartition& g)
{
    require_same_space(rho.size(), g.space().size(), "conditional_triviality");
    // rho^G is constant on blocks, so one row per block of positive mass
    // covers every rho-positive point.
    const auto conditioner = universal_conditioner(g);
    for (std::size_t b = 0; b < g.block_count(); ++b) {
        const Event block = g.block(b);
        if (sgn(mass(rho, block)) == 0) {
            continue;
        }
        if (!is_trivial_on(conditioner(rho, block.members().front()), g)) {
            return false;
        }
    }
    return true;
}

} // namespace rcdlab
