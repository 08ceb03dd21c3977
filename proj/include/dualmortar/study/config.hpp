#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualmortar/elasticity/problem.hpp"

namespace dualmortar::study {

/// One run of the command-line harness. Every field has a default, so a config file only
/// lists what differs.
struct StudyConfig {
    std::string command;
    std::string geometry = "plate_straight_matching";
    int degree = 2;
    int levels = 4;
    int first_level = 0;
    std::vector<mortar::MultiplierKind> multipliers{mortar::MultiplierKind::standard, mortar::MultiplierKind::naive,
                                                    mortar::MultiplierKind::optimal};
    /// Interface elements (slave, master) of the coarsest plate mesh; one run per entry.
    std::vector<std::array<int, 2>> ratios{{3, 2}};
    elasticity::SlavePolicy slave_policy = elasticity::SlavePolicy::given;
    dual::WeightMode weight = dual::WeightMode::physical;
    int bulk_points = 0;
    int error_points = 0;
    int segment_points = 0;
    std::string out = "out";
    std::uint64_t seed = 0x5EED;

    // elasticity
    double load = 10.0;
    elasticity::Material plate_material{1e5, 0.3, elasticity::Plane::stress};
    elasticity::Plane annulus_plane = elasticity::Plane::strain;
    int reference_levels = 1;  ///< extra refinements for the self-computed reference energy
    mortar::LinearSolver solver = mortar::LinearSolver::direct;
    bool saddle_point = false;
    bool timings = false;
    Execution execution = Execution::parallel;

    // verify-basis
    std::vector<int> degrees;  ///< empty means {degree}
    int spaces = 200;
    int tensor_spaces = 20;
    int max_elements = 30;

    // sparsity
    int level = 0;
    bool export_matrices = true;
};

/// Fields present in `j` replace the defaults; unknown keys are configuration errors.
StudyConfig config_from_json(const nlohmann::json& j);
StudyConfig read_config(const std::string& path);
nlohmann::json to_json(const StudyConfig& c);

/// Checks ranges (levels >= 1, p in 1..4, positive ratios, known geometry); configuration error otherwise.
void validate(const StudyConfig& c);

/// "3:2" -> {3, 2}.
std::array<int, 2> parse_ratio(const std::string& s);

}  // namespace dualmortar::study
