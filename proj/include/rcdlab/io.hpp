#pragma once

// JSON transport. Rationals travel as "p/q" strings so exactness survives.
//
// Space description:
//   { "n": 4, "blocks": [[0,1],[2,3]], "rho": ["1/6","1/3","1/4","1/4"] }

#include "rcdlab/continuum.hpp"
#include "rcdlab/iterated.hpp"
#include "rcdlab/measurable.hpp"
#include "rcdlab/rcd_engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace rcdlab {

using Json = nlohmann::ordered_json;

struct SpaceDescription {
    FinitePartition partition;
    RationalMeasure rho;

    FiniteSpace space() const { return partition.space(); }
};

/// Throws ParseError on malformed structure; partition and measure errors
/// (OverlapError, CoverError, InvalidMeasure, ...) propagate unchanged.
SpaceDescription parse_space_description(const Json& doc);
SpaceDescription parse_space_description(const std::string& text);
SpaceDescription load_space_description(const std::filesystem::path& path);

Json to_json(const SpaceDescription& desc);
Json to_json(const Event& e);
Json to_json(const RationalMeasure& mu);
Json to_json(const RcdReport& report);
Json to_json(const Remark2Verdict& verdict);
Json to_json(const Theorem7Report& report);
Json to_json(const continuum::Remark5IdentityReport& report);
Json to_json(const continuum::Theorem7ConsequenceReport& report);

/// Header "N,conditionally_trivial", one line per row.
std::string discretization_csv(const std::vector<continuum::DiscretizationRow>& rows);

} // namespace rcdlab
