#include "rcdlab/io.hpp"

#include "rcdlab/errors.hpp"

#include <fstream>
#include <sstream>

namespace rcdlab {

namespace {

std::size_t as_index(const Json& v, const char* what)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ParseError(std::string(what) + " must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

Rational as_rational(const Json& v)
{
    if (v.is_string()) {
        return parse_rational(v.get<std::string>());
    }
    if (v.is_number_integer()) {
        return Rational(v.get<long>());
    }
    throw ParseError("weights must be \"p/q\" strings or integers");
}

} // namespace

SpaceDescription parse_space_description(const Json& doc)
{
    if (!doc.is_object()) {
        throw ParseError("space description must be a JSON object");
    }
    for (const char* key : {"n", "blocks", "rho"}) {
        if (!doc.contains(key)) {
            throw ParseError(std::string("space description lacks \"") + key + "\"");
        }
    }
    const std::size_t n = as_index(doc.at("n"), "\"n\"");
    const FiniteSpace space(n);

    const Json& blocks_json = doc.at("blocks");
    if (!blocks_json.is_array()) {
        throw ParseError("\"blocks\" must be an array of arrays");
    }
    std::vector<std::vector<Point>> blocks;
    for (const auto& b : blocks_json) {
        if (!b.is_array()) {
            throw ParseError("\"blocks\" must be an array of arrays");
        }
        std::vector<Point> block;
        for (const auto& x : b) {
            block.push_back(as_index(x, "block member"));
        }
        blocks.push_back(std::move(block));
    }

    const Json& rho_json = doc.at("rho");
    if (!rho_json.is_array() || rho_json.size() != n) {
        throw ParseError("\"rho\" must be an array of n weights");
    }
    std::vector<Rational> weights;
    weights.reserve(n);
    for (const auto& w : rho_json) {
        weights.push_back(as_rational(w));
    }
    return SpaceDescription{make_partition(space, std::move(blocks)), RationalMeasure(std::move(weights))};
}

SpaceDescription parse_space_description(const std::string& text)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_space_description(doc);
}

SpaceDescription load_space_description(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_space_description(buffer.str());
}

Json to_json(const SpaceDescription& desc)
{
    Json doc;
    doc["n"] = desc.space().size();
    doc["blocks"] = desc.partition.blocks();
    doc["rho"] = to_json(desc.rho);
    return doc;
}

Json to_json(const Event& e) { return Json(e.members()); }

Json to_json(const RationalMeasure& mu)
{
    Json out = Json::array();
    for (const auto& w : mu.weights()) {
        out.push_back(to_string(w));
    }
    return out;
}

Json to_json(const RcdReport& report)
{
    Json out;
    out["measurable"] = report.measurable;
    out["identity_holds"] = report.identity_holds;
    if (report.failing_witness) {
        const auto& w = *report.failing_witness;
        out["witness"] = Json{{"A", to_json(w.a)}, {"G", to_json(w.g)}, {"lhs", to_string(w.lhs)},
                              {"rhs", to_string(w.rhs)}};
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

Json to_json(const Remark2Verdict& verdict)
{
    return Json{{"trivial", verdict.trivial},
                {"constant_map_is_rcd", verdict.constant_map_is_rcd},
                {"rcd_almost_constant", verdict.rcd_almost_constant},
                {"coherent", verdict.coherent()}};
}

Json to_json(const Theorem7Report& report)
{
    Json out;
    out["conditionally_trivial"] = report.conditionally_trivial;
    out["forward"] = Json{{"applicable", report.forward.applicable},
                          {"witness_is_iterated_rcd", report.forward.witness_is_iterated_rcd},
                          {"witness_measurable", report.forward.witness_measurable},
                          {"passed", report.forward.passed()}};
    const auto& back = report.backward;
    Json backward{{"status", to_string(back.status)}};
    if (back.status != BackwardStatus::NotSupplied) {
        backward["candidate_is_iterated_rcd"] = back.candidate_is_iterated_rcd;
        backward["candidate_measurable"] = back.candidate_measurable;
    }
    if (back.status == BackwardStatus::Checked) {
        backward["agreement_set_measurable"] = back.agreement_set_measurable;
        backward["conditionally_trivial"] = back.conditionally_trivial;
    }
    backward["passed"] = back.passed();
    out["backward"] = std::move(backward);
    out["diagonal_mass"] = back.diagonal_mass ? Json(to_string(*back.diagonal_mass)) : Json(nullptr);
    return out;
}

Json to_json(const continuum::Remark5IdentityReport& report)
{
    Json out;
    out["m0"] = to_string(report.m0);
    out["identity_pairs_checked"] = report.pairs_checked;
    out["all_exact"] = report.all_exact;
    Json failures = Json::array();
    for (const auto& p : report.pairs) {
        if (!p.exact()) {
            failures.push_back(Json{{"g_index", p.g_index},
                                    {"a_index", p.a_index},
                                    {"lhs", to_string(p.lhs)},
                                    {"rhs", to_string(p.rhs)}});
        }
    }
    out["failures"] = std::move(failures);
    return out;
}

Json to_json(const continuum::Theorem7ConsequenceReport& report)
{
    Json out;
    out["m0"] = to_string(report.m0);
    out["identity_pairs_checked"] = report.identity_pairs_checked;
    out["all_exact"] = report.identity_all_exact;
    out["triviality_failure_value"] = to_string(report.triviality_failure_value);
    out["theorem7_conclusion"] = report.conclusion;
    return out;
}

std::string discretization_csv(const std::vector<continuum::DiscretizationRow>& rows)
{
    std::string out = "N,conditionally_trivial\n";
    for (const auto& r : rows) {
        out += std::to_string(r.bins) + "," + (r.conditionally_trivial ? "true" : "false") + "\n";
    }
    return out;
}

} // namespace rcdlab
