#include "rcdlab/campaign.hpp"

#include "rcdlab/errors.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace rcdlab {

std::string to_string(Suite suite)
{
    switch (suite) {
    case Suite::Rcd:
        return "rcd";
    case Suite::Remark2:
        return "remark2";
    case Suite::Lemma3:
        return "lemma3";
    case Suite::Theorem7:
        return "theorem7";
    case Suite::Uniqueness:
        return "uniqueness";
    }
    return "unknown";
}

Suite parse_suite(const std::string& name)
{
    for (Suite s : all_suites()) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw ConfigError("unknown suite '" + name + "'");
}

const std::vector<Suite>& all_suites()
{
    static const std::vector<Suite> suites{Suite::Rcd, Suite::Remark2, Suite::Lemma3, Suite::Theorem7,
                                           Suite::Uniqueness};
    return suites;
}

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

ProductEvent product_event_from_mask(const FinitePartition& g, std::uint64_t mask)
{
    const std::size_t n = g.space().size();
    ProductEvent e(g.space());
    for (std::size_t b = 0; b < g.block_count(); ++b) {
        for (Point y = 0; y < n; ++y) {
            if ((mask >> (b * n + y)) & 1U) {
                for (Point x : g.blocks()[b]) {
                    e.set(x, y);
                }
            }
        }
    }
    return e;
}

SuiteResult rcd_suite(const Instance& inst)
{
    const auto k = compute_rcd(inst.rho, inst.partition);
    const auto report = check_rcd(k, inst.rho, inst.partition);
    const auto universal = check_rcd(universal_conditioner(inst.partition).kernel_for(inst.rho), inst.rho,
                                     inst.partition);
    const bool trivial = conditional_triviality(inst.rho, inst.partition);
    Json detail = to_json(report);
    detail["universal_conditioner_passes"] = universal.passed();
    detail["conditionally_trivial"] = trivial;
    return {report.passed() && universal.passed() && trivial, std::move(detail)};
}

SuiteResult remark2_suite(const Instance& inst)
{
    const auto verdict = remark2_equivalence(inst.rho, inst.partition);
    return {verdict.coherent(), to_json(verdict)};
}

SuiteResult lemma3_suite(const Instance& inst, std::uint64_t seed)
{
    constexpr std::size_t exhaustive_limit = 12;
    constexpr std::size_t samples = 64;
    const auto& g = inst.partition;
    const auto k = compute_rcd(inst.rho, g);
    const auto singletons = FinitePartition::singletons(g.space());
    const std::size_t atoms = g.block_count() * g.space().size();
    const bool exhaustive = atoms <= exhaustive_limit;

    std::size_t checked = 0;
    Json failure = nullptr;
    auto check = [&](const ProductEvent& e) {
        ++checked;
        const bool measurable = in_product_sigma(e, g, singletons);
        const Rational lhs = lemma3_lhs(e, inst.rho);
        const Rational rhs = lemma3_rhs(e, k, inst.rho);
        if ((!measurable || lhs != rhs) && failure.is_null()) {
            failure = Json{{"event_size", e.count()},
                           {"in_product_sigma", measurable},
                           {"lhs", to_string(lhs)},
                           {"rhs", to_string(rhs)}};
        }
    };
    if (exhaustive) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms); ++mask) {
            check(product_event_from_mask(g, mask));
        }
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < samples; ++i) {
            check(random_product_event(g, rng));
        }
    }
    Json detail{{"events_checked", checked}, {"exhaustive", exhaustive}, {"all_equal", failure.is_null()},
                {"failure", failure}};
    return {failure.is_null(), std::move(detail)};
}

SuiteResult theorem7_suite(const Instance& inst)
{
    try {
        const auto report = theorem7_check(inst.rho, inst.partition, build_iterated(inst.rho, inst.partition));
        const bool ok = report.passed() && report.forward.applicable
                        && report.backward.status == BackwardStatus::Checked && report.backward.diagonal_mass == 1;
        return {ok, to_json(report)};
    } catch (const InconsistentVerdict& e) {
        return {false, Json{{"inconsistent_verdict", e.what()}}};
    }
}

SuiteResult uniqueness_suite(const Instance& inst, std::uint64_t seed)
{
    const auto& rho = inst.rho;
    const auto& g = inst.partition;
    const auto k = compute_rcd(rho, g);
    const auto k_universal = universal_conditioner(g).kernel_for(rho);
    bool ok = essentially_equal(k, k_universal, rho);

    std::size_t null_perturbations = 0;
    std::size_t positive_perturbations = 0;
    if (rho.size() >= 2) {
        std::mt19937_64 rng(seed);
        // Any measure on a null atom keeps the kernel an rcd, essentially
        // equal to the original.
        for (std::size_t b = 0; b < g.block_count(); ++b) {
            if (sgn(mass(rho, g.block(b))) != 0) {
                continue;
            }
            const auto replacement = different_measure(k.row(g.blocks()[b].front()), rng);
            Kernel perturbed = k;
            for (Point x : g.blocks()[b]) {
                perturbed = perturbed.with_row(x, replacement);
            }
            ++null_perturbations;
            ok = ok && check_rcd(perturbed, rho, g).passed() && essentially_equal(perturbed, k, rho);
        }
        // Changing the row at a point of positive mass always breaks the
        // identity, whether or not measurability is kept.
        const Event support_event = rho.support();
        const auto& support = support_event.members();
        const Point x = support[pick(rng, 0, support.size() - 1)];
        const auto replacement = different_measure(k.row(x), rng);
        const Kernel single = k.with_row(x, replacement);
        Kernel whole_block = k;
        const Event atom = atom_of(g, x);
        for (Point y : atom.members()) {
            whole_block = whole_block.with_row(y, replacement);
        }
        positive_perturbations = 2;
        ok = ok && !check_rcd(single, rho, g).passed() && !check_rcd(whole_block, rho, g).identity_holds
             && !essentially_equal(single, k, rho);
    }
    Json detail{{"null_perturbations", null_perturbations},
                {"positive_perturbations", positive_perturbations},
                {"passed", ok}};
    return {ok, std::move(detail)};
}

} // namespace

ProductEvent random_product_event(const FinitePartition& g, std::mt19937_64& rng)
{
    ProductEvent e(g.space());
    for (const auto& block : g.blocks()) {
        for (Point y = 0; y < g.space().size(); ++y) {
            if (pick(rng, 0, 1) == 1) {
                for (Point x : block) {
                    e.set(x, y);
                }
            }
        }
    }
    return e;
}

RationalMeasure different_measure(const RationalMeasure& original, std::mt19937_64& rng)
{
    const FiniteSpace space = original.space();
    if (space.size() < 2) {
        throw InvalidMeasure("a one-point space carries a single probability measure");
    }
    const Point y = pick(rng, 0, space.size() - 1);
    auto candidate = RationalMeasure::dirac(space, y);
    if (candidate == original) {
        candidate = RationalMeasure::dirac(space, (y + 1) % space.size());
    }
    return candidate;
}

SuiteResult run_suite(Suite suite, const Instance& instance, std::uint64_t seed)
{
    switch (suite) {
    case Suite::Rcd:
        return rcd_suite(instance);
    case Suite::Remark2:
        return remark2_suite(instance);
    case Suite::Lemma3:
        return lemma3_suite(instance, seed);
    case Suite::Theorem7:
        return theorem7_suite(instance);
    case Suite::Uniqueness:
        return uniqueness_suite(instance, seed);
    }
    throw ConfigError("unknown suite");
}

// ---------------------------------------------------------------------------
// Campaigns

void CampaignConfig::validate() const
{
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (max_points < 2 || max_points > 64) {
        throw ConfigError("max_points must lie between 2 and 64");
    }
    if (suites.empty()) {
        throw ConfigError("no suites selected");
    }
}

std::uint64_t trial_seed(std::uint64_t campaign_seed, std::size_t trial)
{
    // splitmix64 finalizer over (seed, trial).
    std::uint64_t z = campaign_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Instance generate_instance(std::uint64_t seed, std::size_t max_points)
{
    std::mt19937_64 rng(seed);
    const std::size_t n = pick(rng, 2, std::max<std::size_t>(2, max_points));
    const FiniteSpace space(n);

    const std::size_t block_count = pick(rng, 1, n);
    std::vector<Point> order(n);
    std::iota(order.begin(), order.end(), Point{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<Point>> blocks(block_count);
    for (std::size_t i = 0; i < n; ++i) {
        blocks[i < block_count ? i : pick(rng, 0, block_count - 1)].push_back(order[i]);
    }

    const std::size_t denominator = pick(rng, 1, 64);
    std::vector<unsigned long> units(n, 0);
    for (std::size_t u = 0; u < denominator; ++u) {
        ++units[pick(rng, 0, n - 1)];
    }
    std::vector<Rational> weights(n);
    for (std::size_t x = 0; x < n; ++x) {
        weights[x] = Rational(units[x], denominator);
    }
    return Instance{make_partition(space, std::move(blocks)), RationalMeasure(std::move(weights))};
}

namespace {

std::optional<Instance> without_point(const Instance& inst, Point drop)
{
    const std::size_t n = inst.space().size();
    if (n < 2) {
        return std::nullopt;
    }
    const Rational remaining = 1 - inst.rho.weight(drop);
    if (sgn(remaining) == 0) {
        return std::nullopt;
    }
    std::vector<Rational> weights;
    for (Point x = 0; x < n; ++x) {
        if (x != drop) {
            weights.push_back(inst.rho.weight(x) / remaining);
        }
    }
    std::vector<std::vector<Point>> blocks;
    for (const auto& block : inst.partition.blocks()) {
        std::vector<Point> kept;
        for (Point x : block) {
            if (x != drop) {
                kept.push_back(x > drop ? x - 1 : x);
            }
        }
        if (!kept.empty()) {
            blocks.push_back(std::move(kept));
        }
    }
    const FiniteSpace space(n - 1);
    return Instance{make_partition(space, std::move(blocks)), RationalMeasure(std::move(weights))};
}

Instance with_blocks_merged(const Instance& inst, std::size_t i, std::size_t j)
{
    auto blocks = inst.partition.blocks();
    blocks[i].insert(blocks[i].end(), blocks[j].begin(), blocks[j].end());
    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(j));
    return Instance{make_partition(inst.space(), std::move(blocks)), inst.rho};
}

std::vector<Instance> shrink_candidates(const Instance& inst)
{
    std::vector<Instance> out;
    for (Point x = 0; x < inst.space().size(); ++x) {
        if (auto smaller = without_point(inst, x)) {
            out.push_back(std::move(*smaller));
        }
    }
    const std::size_t blocks = inst.partition.block_count();
    for (std::size_t i = 0; i < blocks; ++i) {
        for (std::size_t j = i + 1; j < blocks; ++j) {
            out.push_back(with_blocks_merged(inst, i, j));
        }
    }
    for (auto flat : {RationalMeasure::uniform_on(inst.rho.support()), RationalMeasure::uniform(inst.space())}) {
        if (flat != inst.rho) {
            out.push_back(Instance{inst.partition, std::move(flat)});
        }
    }
    return out;
}

} // namespace

Instance shrink_instance(Instance instance, const std::function<bool(const Instance&)>& fails)
{
    constexpr int max_steps = 1000;
    for (int step = 0; step < max_steps; ++step) {
        bool progressed = false;
        for (auto& candidate : shrink_candidates(instance)) {
            if (fails(candidate)) {
                instance = std::move(candidate);
                progressed = true;
                break;
            }
        }
        if (!progressed) {
            break;
        }
    }
    return instance;
}

CampaignSummary run_campaign(const CampaignConfig& config, const std::optional<std::filesystem::path>& repro_dir,
                             const SuiteChecker& checker)
{
    config.validate();
    const SuiteChecker check = checker ? checker : [](Suite s, const Instance& inst, std::uint64_t seed) {
        return run_suite(s, inst, seed).passed;
    };

    CampaignSummary summary;
    summary.config = config;
    for (Suite s : config.suites) {
        summary.tallies.push_back({s, 0, 0});
    }
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = trial_seed(config.seed, trial);
        const Instance instance = generate_instance(seed, config.max_points);
        for (auto& tally : summary.tallies) {
            if (check(tally.suite, instance, seed)) {
                ++tally.passed;
                continue;
            }
            ++tally.failed;
            CampaignFailure failure{trial, tally.suite, instance,
                                    shrink_instance(instance,
                                                    [&](const Instance& candidate) {
                                                        return !check(tally.suite, candidate, seed);
                                                    }),
                                    std::nullopt};
            if (repro_dir) {
                const auto path = *repro_dir / ("rcdlab-seed" + std::to_string(config.seed) + "-trial"
                                                + std::to_string(trial) + "-" + to_string(tally.suite)
                                                + ".repro.json");
                std::ofstream out(path);
                out << repro_document(failure, config.seed).dump(2) << '\n';
                if (!out) {
                    throw ConfigError("cannot write " + path.string());
                }
                failure.repro_file = path;
            }
            summary.failures.push_back(std::move(failure));
        }
    }
    return summary;
}

Json repro_document(const CampaignFailure& failure, std::uint64_t campaign_seed)
{
    Json doc = to_json(failure.shrunk);
    doc["suite"] = to_string(failure.suite);
    doc["campaign_seed"] = campaign_seed;
    doc["trial"] = failure.trial;
    doc["trial_seed"] = trial_seed(campaign_seed, failure.trial);
    doc["original"] = to_json(failure.original);
    return doc;
}

Json to_json(const CampaignSummary& summary)
{
    Json out;
    out["seed"] = summary.config.seed;
    out["trials"] = summary.config.trials;
    out["max_points"] = summary.config.max_points;
    Json suites = Json::object();
    for (const auto& t : summary.tallies) {
        suites[to_string(t.suite)] = Json{{"passed", t.passed}, {"failed", t.failed}};
    }
    out["suites"] = std::move(suites);
    Json failures = Json::array();
    for (const auto& f : summary.failures) {
        Json entry{{"trial", f.trial}, {"suite", to_string(f.suite)}, {"shrunk", to_json(f.shrunk)}};
        entry["repro_file"] = f.repro_file ? Json(f.repro_file->filename().string()) : Json(nullptr);
        failures.push_back(std::move(entry));
    }
    out["failures"] = std::move(failures);
    out["all_passed"] = summary.all_passed();
    return out;
}

} // namespace rcdlab
