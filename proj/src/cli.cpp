#include "rcdlab/cli.hpp"

#include "rcdlab/campaign.hpp"
#include "rcdlab/continuum.hpp"
#include "rcdlab/errors.hpp"
#include "rcdlab/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>

namespace rcdlab::cli {

namespace {

enum class Format { Json, Text };

void flatten(const Json& value, const std::string& prefix, std::ostream& out)
{
    if (value.is_object()) {
        for (const auto& [key, child] : value.items()) {
            flatten(child, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (value.is_array() && !value.empty() && (value.front().is_object() || value.front().is_array())) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            flatten(value[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else {
        out << prefix << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
}

void emit(const Json& report, Format format, std::ostream& out)
{
    if (format == Format::Json) {
        out << report.dump(2) << '\n';
    } else {
        flatten(report, "", out);
    }
}

int run_check(const std::string& file, const std::string& suite_name, Format format, std::ostream& out)
{
    const Suite suite = parse_suite(suite_name);
    const Instance instance = load_space_description(file);
    const SuiteResult result = run_suite(suite, instance, 0);
    Json report{{"suite", to_string(suite)}, {"passed", result.passed}, {"report", result.detail}};
    emit(report, format, out);
    return result.passed ? Pass : PropertyFailure;
}

int run_campaign_command(const CampaignConfig& config, const std::string& repro_dir, Format format,
                         std::ostream& out)
{
    const auto summary = run_campaign(config, std::filesystem::path(repro_dir));
    emit(to_json(summary), format, out);
    return summary.all_passed() ? Pass : PropertyFailure;
}

int run_remark5(const std::string& m0_text, std::size_t pairs, const std::vector<std::size_t>& levels,
                std::uint64_t seed, const std::string& csv_path, Format format, std::ostream& out)
{
    const Rational m0 = parse_rational(m0_text);
    const continuum::DiracProductKernel kernel(m0);
    if (pairs < 1) {
        throw ConfigError("--pairs must be at least 1");
    }
    const auto consequence = continuum::theorem7_consequence_report(kernel.m0(), pairs, seed);
    const auto rows = continuum::discretization_study(kernel.m0(), levels);

    Json report = to_json(consequence);
    Json table = Json::array();
    bool all_trivial = true;
    for (const auto& r : rows) {
        table.push_back(Json{{"N", r.bins}, {"conditionally_trivial", r.conditionally_trivial}});
        all_trivial = all_trivial && r.conditionally_trivial;
    }
    report["discretization"] = std::move(table);
    emit(report, format, out);
    if (format == Format::Text) {
        out << discretization_csv(rows);
    }
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        csv << discretization_csv(rows);
        if (!csv) {
            throw ConfigError("cannot write " + csv_path);
        }
    }
    return consequence.identity_all_exact && all_trivial ? Pass : PropertyFailure;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Regular conditional distributions on finite and semi-analytic spaces"};
    app.require_subcommand(1);

    std::string format_name = "json";
    app.add_option("--format", format_name, "Report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    auto* check = app.add_subcommand("check", "Run one suite on a space-description file");
    std::string file;
    std::string suite = "rcd";
    check->add_option("--file", file, "Space-description JSON")->required();
    check->add_option("--suite", suite, "rcd, remark2, lemma3, theorem7 or uniqueness")->capture_default_str();

    auto* campaign = app.add_subcommand("campaign", "Run seeded random property campaigns");
    CampaignConfig config;
    config.trials = 100;
    std::vector<std::string> suite_names;
    std::string repro_dir = ".";
    campaign->add_option("--seed", config.seed)->capture_default_str();
    campaign->add_option("--trials", config.trials)->capture_default_str();
    campaign->add_option("--max-points", config.max_points)->capture_default_str();
    campaign->add_option("--suites", suite_names, "Comma-separated suites (default: all)")->delimiter(',');
    campaign->add_option("--repro-dir", repro_dir, "Directory for *.repro.json files")->capture_default_str();

    auto* remark5 = app.add_subcommand("remark5", "Continuum counterexample on [0,1] x {0,1}");
    std::string m0_text;
    std::size_t pairs = 2500;
    std::vector<std::size_t> levels{2, 8, 64, 1024};
    std::uint64_t battery_seed = 0;
    std::string csv_path;
    remark5->add_option("--m0", m0_text, "Weight m(0) as p/q, strictly between 0 and 1")->required();
    remark5->add_option("--pairs", pairs)->capture_default_str();
    remark5->add_option("--levels", levels, "Comma-separated bin counts")->delimiter(',');
    remark5->add_option("--seed", battery_seed)->capture_default_str();
    remark5->add_option("--csv", csv_path, "Also write the discretization table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Pass : InputError;
    }
    const Format format = format_name == "text" ? Format::Text : Format::Json;

    try {
        if (check->parsed()) {
            return run_check(file, suite, format, out);
        }
        if (campaign->parsed()) {
            if (!suite_names.empty()) {
                config.suites.clear();
                for (const auto& name : suite_names) {
                    config.suites.push_back(parse_suite(name));
                }
            }
            config.validate();
            return run_campaign_command(config, repro_dir, format, out);
        }
        return run_remark5(m0_text, pairs, levels, battery_seed, csv_path, format, out);
    } catch (const InconsistentVerdict& e) {
        err << "error: " << e.what() << '\n';
        return PropertyFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return InputError;
    }
}

} // namespace rcdlab::cli
