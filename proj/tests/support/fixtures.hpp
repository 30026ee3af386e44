#pragma once

#include "rcdlab/measurable.hpp"
#include "rcdlab/rational.hpp"

#include <string>
#include <vector>

namespace rcdlab::testing {

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

inline RationalMeasure measure(const std::vector<std::string>& weights)
{
    std::vector<Rational> w;
    for (const auto& s : weights) {
        w.push_back(parse_rational(s));
    }
    return RationalMeasure(std::move(w));
}

inline FinitePartition partition(std::size_t n, std::vector<std::vector<Point>> blocks)
{
    return make_partition(FiniteSpace(n), std::move(blocks));
}

} // namespace rcdlab::testing
