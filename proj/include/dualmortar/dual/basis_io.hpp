#pragma once

#include <string>

#include <json.hpp>

#include "dualmortar/dual/dual_basis.hpp"

namespace dualmortar::dual {

/// {knots, degree, kind, weight_mode, crosspoints, retained, functions, scale, z, log}
nlohmann::json to_json(const DualBasis& basis);

void write_json(const DualBasis& basis, const std::string& path);

}  // namespace dualmortar::dual
