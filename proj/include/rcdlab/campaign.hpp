#pragma once

// Named property suites over finite instances, and seeded campaigns that run
// them over randomly generated instances with shrinking of failures.

#include "rcdlab/io.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rcdlab {

enum class Suite { Rcd, Remark2, Lemma3, Theorem7, Uniqueness };

std::string to_string(Suite suite);
/// Throws ConfigError for an unknown name.
Suite parse_suite(const std::string& name);
const std::vector<Suite>& all_suites();

using Instance = SpaceDescription;

struct SuiteResult {
    bool passed = false;
    Json detail;
};

/// Runs one suite on one instance. `seed` drives any sampling the suite does
/// (random product events, perturbation targets).
SuiteResult run_suite(Suite suite, const Instance& instance, std::uint64_t seed);

/// Uniformly random event of G (x) Sigma: a union of rectangles
/// (block of g) x {y}.
ProductEvent random_product_event(const FinitePartition& g, std::mt19937_64& rng);

/// A measure different from `original` (a Dirac mass where possible).
/// Requires at least two points.
RationalMeasure different_measure(const RationalMeasure& original, std::mt19937_64& rng);

struct CampaignConfig {
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    std::size_t max_points = 10;
    std::vector<Suite> suites = all_suites();

    /// Throws ConfigError unless trials >= 1, 2 <= max_points <= 64 and at
    /// least one suite is selected.
    void validate() const;
};

/// Deterministic per-trial seed.
std::uint64_t trial_seed(std::uint64_t campaign_seed, std::size_t trial);

/// Random instance: 2..max_points points, a random partition and weights
/// with a common denominator of at most 64 (zero weights included).
Instance generate_instance(std::uint64_t seed, std::size_t max_points);

/// Greedy shrinking: removes points, merges blocks and flattens weights for as
/// long as `fails` keeps holding.
Instance shrink_instance(Instance instance, const std::function<bool(const Instance&)>& fails);

struct SuiteTally {
    Suite suite;
    std::size_t passed = 0;
    std::size_t failed = 0;
};

struct CampaignFailure {
    std::size_t trial = 0;
    Suite suite;
    Instance original;
    Instance shrunk;
    std::optional<std::filesystem::path> repro_file;
};

struct CampaignSummary {
    CampaignConfig config;
    std::vector<SuiteTally> tallies;
    std::vector<CampaignFailure> failures;

    bool all_passed() const noexcept { return failures.empty(); }
};

/// Predicate deciding whether an instance passes a suite; the default runs
/// run_suite.
using SuiteChecker = std::function<bool(Suite, const Instance&, std::uint64_t)>;

/// Runs every selected suite on `trials` generated instances. Failures are
/// shrunk and, when repro_dir is set, written there as *.repro.json.
CampaignSummary run_campaign(const CampaignConfig& config, const std::optional<std::filesystem::path>& repro_dir,
                             const SuiteChecker& checker = {});

Json to_json(const CampaignSummary& summary);

/// Reproduction document: the space description plus suite and seeds.
Json repro_document(const CampaignFailure& failure, std::uint64_t campaign_seed);

} // namespace rcdlab
