#pragma once

#include <string>

#include <json.hpp>

#include "dualmortar/geometry/domain.hpp"

namespace dualmortar::geometry {

/// Multipatch domain in the JSON layout described in docs/domain_format.md.
nlohmann::json to_json(const MultipatchDomain& domain);

/// Parses a domain; interfaces without a "crosspoints" entry get detected flags.
MultipatchDomain domain_from_json(const nlohmann::json& j);

void write_domain(const MultipatchDomain& domain, const std::string& path);
MultipatchDomain read_domain(const std::string& path);

}  // namespace dualmortar::geometry
