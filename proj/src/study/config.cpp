#include "dualmortar/study/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "dualmortar/common/errors.hpp"
#include "dualmortar/geometry/benchmarks.hpp"

namespace dualmortar::study {

using nlohmann::json;

namespace {

template <class T>
T get(const json& j, const char* key)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

std::uint64_t parse_seed(const json& v)
{
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        try {
            std::size_t used = 0;
            const auto x = std::stoull(s, &used, 0);
            if (used == s.size()) return x;
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("seed must be a non-negative integer or an integer string such as \"0x5EED\"");
}

}  // namespace

std::array<int, 2> parse_ratio(const std::string& s)
{
    const auto colon = s.find(':');
    try {
        if (colon != std::string::npos) {
            std::size_t a = 0, b = 0;
            const int ns = std::stoi(s.substr(0, colon), &a);
            const int nm = std::stoi(s.substr(colon + 1), &b);
            if (a == colon && b == s.size() - colon - 1) return {ns, nm};
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("mesh ratio '" + s + "' is not of the form slave:master");
}

StudyConfig config_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{
        "command", "geometry", "degree", "levels", "first_level", "multipliers", "ratios", "slave_policy",
        "weight", "quadrature", "out", "seed", "load", "material", "annulus_plane", "reference_levels",
        "solver", "saddle_point", "timings", "execution", "degrees", "spaces", "tensor_spaces", "max_elements",
        "level", "export_matrices"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");

    StudyConfig c;
    if (j.contains("command")) c.command = get<std::string>(j, "command");
    if (j.contains("geometry")) c.geometry = get<std::string>(j, "geometry");
    if (j.contains("degree")) c.degree = get<int>(j, "degree");
    if (j.contains("levels")) c.levels = get<int>(j, "levels");
    if (j.contains("first_level")) c.first_level = get<int>(j, "first_level");
    if (j.contains("multipliers")) {
        c.multipliers.clear();
        for (const auto& s : get<std::vector<std::string>>(j, "multipliers"))
            c.multipliers.push_back(mortar::multiplier_kind_from_string(s));
    }
    if (j.contains("ratios")) {
        c.ratios.clear();
        for (const auto& r : j.at("ratios")) {
            if (r.is_string()) c.ratios.push_back(parse_ratio(r.get<std::string>()));
            else if (r.is_array() && r.size() == 2 && r[0].is_number_integer() && r[1].is_number_integer())
                c.ratios.push_back({r[0].get<int>(), r[1].get<int>()});
            else throw ConfigError("ratios entries must be \"s:m\" or [s, m]");
        }
    }
    if (j.contains("slave_policy")) c.slave_policy = elasticity::slave_policy_from_string(get<std::string>(j, "slave_policy"));
    if (j.contains("weight")) c.weight = dual::weight_mode_from_string(get<std::string>(j, "weight"));
    if (j.contains("quadrature")) {
        const auto& q = j.at("quadrature");
        if (!q.is_object()) throw ConfigError("quadrature must be an object");
        for (const auto& [key, value] : q.items()) {
            if (key == "bulk") c.bulk_points = get<int>(q, "bulk");
            else if (key == "error") c.error_points = get<int>(q, "error");
            else if (key == "segment") c.segment_points = get<int>(q, "segment");
            else throw ConfigError("unknown quadrature field '" + key + "'");
        }
    }
    if (j.contains("out")) c.out = get<std::string>(j, "out");
    if (j.contains("seed")) c.seed = parse_seed(j.at("seed"));
    if (j.contains("load")) c.load = get<double>(j, "load");
    if (j.contains("material")) {
        const auto& m = j.at("material");
        if (!m.is_object()) throw ConfigError("material must be an object");
        for (const auto& [key, value] : m.items()) {
            if (key == "E") c.plate_material.E = get<double>(m, "E");
            else if (key == "nu") c.plate_material.nu = get<double>(m, "nu");
            else if (key == "plane") c.plate_material.plane = elasticity::plane_from_string(get<std::string>(m, "plane"));
            else throw ConfigError("unknown material field '" + key + "'");
        }
    }
    if (j.contains("annulus_plane")) c.annulus_plane = elasticity::plane_from_string(get<std::string>(j, "annulus_plane"));
    if (j.contains("reference_levels")) c.reference_levels = get<int>(j, "reference_levels");
    if (j.contains("solver")) {
        const auto s = get<std::string>(j, "solver");
        if (s == "direct") c.solver = mortar::LinearSolver::direct;
        else if (s == "cg") c.solver = mortar::LinearSolver::cg;
        else throw ConfigError("solver must be direct or cg");
    }
    if (j.contains("saddle_point")) c.saddle_point = get<bool>(j, "saddle_point");
    if (j.contains("timings")) c.timings = get<bool>(j, "timings");
    if (j.contains("execution")) {
        const auto s = get<std::string>(j, "execution");
        if (s == "serial") c.execution = Execution::serial;
        else if (s == "parallel") c.execution = Execution::parallel;
        else throw ConfigError("execution must be serial or parallel");
    }
    if (j.contains("degrees")) c.degrees = get<std::vector<int>>(j, "degrees");
    if (j.contains("spaces")) c.spaces = get<int>(j, "spaces");
    if (j.contains("tensor_spaces")) c.tensor_spaces = get<int>(j, "tensor_spaces");
    if (j.contains("max_elements")) c.max_elements = get<int>(j, "max_elements");
    if (j.contains("level")) c.level = get<int>(j, "level");
    if (j.contains("export_matrices")) c.export_matrices = get<bool>(j, "export_matrices");
    return c;
}

StudyConfig read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return config_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

json to_json(const StudyConfig& c)
{
    json kinds = json::array(), ratios = json::array();
    for (auto k : c.multipliers) kinds.push_back(mortar::to_string(k));
    for (const auto& r : c.ratios) ratios.push_back(std::to_string(r[0]) + ":" + std::to_string(r[1]));
    return {{"command", c.command},
            {"geometry", c.geometry},
            {"degree", c.degree},
            {"levels", c.levels},
            {"first_level", c.first_level},
            {"multipliers", kinds},
            {"ratios", ratios},
            {"slave_policy", elasticity::to_string(c.slave_policy)},
            {"weight", dual::to_string(c.weight)},
            {"quadrature", {{"bulk", c.bulk_points}, {"error", c.error_points}, {"segment", c.segment_points}}},
            {"seed", c.seed},
            {"load", c.load},
            {"material",
             {{"E", c.plate_material.E}, {"nu", c.plate_material.nu}, {"plane", elasticity::to_string(c.plate_material.plane)}}},
            {"annulus_plane", elasticity::to_string(c.annulus_plane)},
            {"reference_levels", c.reference_levels},
            {"solver", c.solver == mortar::LinearSolver::direct ? "direct" : "cg"},
            {"saddle_point", c.saddle_point},
            {"degrees", c.degrees},
            {"spaces", c.spaces},
            {"tensor_spaces", c.tensor_spaces},
            {"max_elements", c.max_elements},
            {"level", c.level}};
}

void validate(const StudyConfig& c)
{
    static const std::set<std::string> commands{"verify-basis", "convergence", "sparsity"};
    if (!commands.count(c.command)) throw ConfigError("unknown command '" + c.command + "'");
    const auto& names = geometry::benchmark_names();
    if (std::find(names.begin(), names.end(), c.geometry) == names.end())
        throw ConfigError("unknown geometry '" + c.geometry + "'");
    const auto degree_ok = [](int p) { return p >= 1 && p <= 4; };
    if (!degree_ok(c.degree)) throw ConfigError("degree must be in 1..4");
    for (int p : c.degrees)
        if (!degree_ok(p)) throw ConfigError("degrees must be in 1..4");
    if (c.levels < 1) throw ConfigError("levels must be at least 1");
    if (c.first_level < 0 || c.level < 0 || c.reference_levels < 1)
        throw ConfigError("first_level and level must be non-negative, reference_levels positive");
    if (c.multipliers.empty()) throw ConfigError("at least one multiplier kind is required");
    if (c.ratios.empty()) throw ConfigError("at least one mesh ratio is required");
    for (const auto& r : c.ratios)
        if (r[0] < 1 || r[1] < 1) throw ConfigError("mesh ratio entries must be positive integers");
    if (c.bulk_points < 0 || c.error_points < 0 || c.segment_points < 0)
        throw ConfigError("quadrature point counts must be non-negative");
    if (c.spaces < 0 || c.tensor_spaces < 0 || c.max_elements < 1)
        throw ConfigError("spaces must be non-negative and max_elements positive");
    if (!(c.plate_material.E > 0.0) || !(c.plate_material.nu > -1.0 && c.plate_material.nu < 0.5))
        throw ConfigError("material needs E > 0 and -1 < nu < 0.5");
    if (c.out.empty()) throw ConfigError("output directory must not be empty");
}

}  // namespace dualmortar::study
