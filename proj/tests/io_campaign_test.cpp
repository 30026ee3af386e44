#include "rcdlab/campaign.hpp"
#include "rcdlab/errors.hpp"
#include "rcdlab/io.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace rcdlab;
using rcdlab::testing::measure;
using rcdlab::testing::partition;

TEST(SpaceDescription, ParsesExampleDocument)
{
    const auto desc = parse_space_description(
        std::string(R"({ "n": 4, "blocks": [[0,1],[2,3]], "rho": ["1/6","1/3","1/4","1/4"] })"));
    EXPECT_EQ(desc.space().size(), 4U);
    EXPECT_EQ(desc.partition, partition(4, {{0, 1}, {2, 3}}));
    EXPECT_EQ(desc.rho, measure({"1/6", "1/3", "1/4", "1/4"}));
}

TEST(SpaceDescription, RejectsBadInput)
{
    EXPECT_THROW(parse_space_description(std::string("{ not json")), ParseError);
    EXPECT_THROW(parse_space_description(std::string(R"({ "n": 2, "blocks": [[0,1]] })")), ParseError);
    EXPECT_THROW(parse_space_description(std::string(R"({ "n": 2, "blocks": [[0,1]], "rho": ["1/2"] })")),
                 ParseError);
    EXPECT_THROW(parse_space_description(std::string(R"({ "n": 2, "blocks": [[0,1]], "rho": ["1/3","1/3"] })")),
                 InvalidMeasure);
    EXPECT_THROW(parse_space_description(std::string(R"({ "n": 2, "blocks": [[0]], "rho": ["1/2","1/2"] })")),
                 CoverError);
    EXPECT_THROW(parse_space_description(std::string(R"({ "n": 2, "blocks": [[0,1]], "rho": ["a","1"] })")),
                 ParseError);
    EXPECT_THROW(parse_space_description(std::string(R"({ "n": -1, "blocks": [], "rho": [] })")), ParseError);
    EXPECT_THROW(load_space_description("/nonexistent/space.json"), ParseError);
}

TEST(SpaceDescription, JsonRoundTripPreservesInstances)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = generate_instance(seed, 12);
        const auto back = parse_space_description(to_json(inst));
        EXPECT_EQ(back.partition, inst.partition);
        EXPECT_EQ(back.rho, inst.rho);
    }
}

TEST(Reports, RcdReportJsonCarriesWitness)
{
    const auto rho = measure({"1/2", "1/2"});
    const auto report = check_rcd(Kernel::constant(rho), rho, FinitePartition::singletons(FiniteSpace(2)));
    const auto j = to_json(report);
    EXPECT_EQ(j.dump(), R"({"measurable":true,"identity_holds":false,"witness":{"A":[0],"G":[0],"lhs":"1/2","rhs":"1/4"}})");
    const auto ok = to_json(check_rcd(compute_rcd(rho, FinitePartition::trivial(FiniteSpace(2))), rho,
                                      FinitePartition::trivial(FiniteSpace(2))));
    EXPECT_EQ(ok.dump(), R"({"measurable":true,"identity_holds":true,"witness":null})");
}

TEST(Reports, IteratedEquivalenceJsonShape)
{
    const auto rho = RationalMeasure::uniform(FiniteSpace(4));
    const auto g = partition(4, {{0, 1}, {2, 3}});
    const auto j = to_json(theorem7_check(rho, g, build_iterated(rho, g)));
    EXPECT_EQ(j["conditionally_trivial"], true);
    EXPECT_EQ(j["backward"]["status"], "checked");
    EXPECT_EQ(j["diagonal_mass"], "1/1");
}

TEST(CampaignConfig, Validation)
{
    CampaignConfig config;
    config.trials = 0;
    EXPECT_THROW(config.validate(), ConfigError);
    config.trials = 1;
    config.max_points = 1;
    EXPECT_THROW(config.validate(), ConfigError);
    config.max_points = 65;
    EXPECT_THROW(config.validate(), ConfigError);
    config.max_points = 64;
    EXPECT_NO_THROW(config.validate());
    config.suites.clear();
    EXPECT_THROW(config.validate(), ConfigError);
    EXPECT_THROW(parse_suite("nope"), ConfigError);
    EXPECT_EQ(parse_suite("theorem7"), Suite::Theorem7);
}

TEST(GenerateInstance, RespectsBoundsAndIsDeterministic)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = generate_instance(seed, 10);
        EXPECT_GE(inst.space().size(), 2U);
        EXPECT_LE(inst.space().size(), 10U);
        for (const auto& w : inst.rho.weights()) {
            EXPECT_LE(w.get_den(), 64);
        }
        const auto again = generate_instance(seed, 10);
        EXPECT_EQ(again.partition, inst.partition);
        EXPECT_EQ(again.rho, inst.rho);
    }
    EXPECT_NE(trial_seed(42, 0), trial_seed(42, 1));
    EXPECT_NE(trial_seed(42, 0), trial_seed(43, 0));
}

TEST(ShrinkInstance, ReachesMinimalFailingShape)
{
    // Synthetic property: "fails" whenever some block has two or more points.
    const auto fails = [](const Instance& inst) {
        for (const auto& b : inst.partition.blocks()) {
            if (b.size() >= 2) {
                return true;
            }
        }
        return false;
    };
    int shrunk_cases = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto inst = generate_instance(seed, 10);
        if (!fails(inst)) {
            continue;
        }
        ++shrunk_cases;
        const auto small = shrink_instance(inst, fails);
        EXPECT_TRUE(fails(small));
        EXPECT_EQ(small.space().size(), 2U);
        EXPECT_EQ(small.partition.block_count(), 1U);
    }
    EXPECT_GT(shrunk_cases, 10);
}

TEST(RunCampaign, AllSuitesPassAndReportIsDeterministic)
{
    CampaignConfig config;
    config.seed = 42;
    config.trials = 60;
    const auto a = run_campaign(config, std::nullopt);
    const auto b = run_campaign(config, std::nullopt);
    EXPECT_TRUE(a.all_passed());
    for (const auto& t : a.tallies) {
        EXPECT_EQ(t.passed, 60U) << to_string(t.suite);
    }
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(RunCampaign, FailuresAreShrunkAndWrittenAsReproFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "rcdlab_repro_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    CampaignConfig config;
    config.seed = 7;
    config.trials = 5;
    config.suites = {Suite::Rcd};
    // Injected defect: any instance with three or more points "fails".
    const SuiteChecker checker = [](Suite, const Instance& inst, std::uint64_t) { return inst.space().size() < 3; };
    const auto summary = run_campaign(config, dir, checker);
    ASSERT_FALSE(summary.all_passed());
    for (const auto& f : summary.failures) {
        EXPECT_EQ(f.shrunk.space().size(), 3U);
        ASSERT_TRUE(f.repro_file.has_value());
        ASSERT_TRUE(std::filesystem::exists(*f.repro_file));
        EXPECT_EQ(f.repro_file->extension(), ".json");
        EXPECT_NE(f.repro_file->filename().string().find(".repro.json"), std::string::npos);
        // The file alone reproduces the failing instance.
        const auto reloaded = load_space_description(*f.repro_file);
        EXPECT_EQ(reloaded.partition, f.shrunk.partition);
        EXPECT_EQ(reloaded.rho, f.shrunk.rho);
        EXPECT_FALSE(checker(f.suite, reloaded, 0));
    }
    std::filesystem::remove_all(dir);
}

TEST(RunSuite, EverySuitePassesOnExampleInstance)
{
    const Instance inst{partition(4, {{0, 1}, {2, 3}}), measure({"1/6", "1/3", "1/4", "1/4"})};
    for (Suite s : all_suites()) {
        EXPECT_TRUE(run_suite(s, inst, 0).passed) << to_string(s);
    }
}
