#include "dualmortar/dual/basis_io.hpp"

#include <fstream>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::dual {

nlohmann::json to_json(const DualBasis& basis)
{
    using nlohmann::json;
    const auto k = basis.knots().knots();
    json functions = json::array();
    for (const auto& f : basis.functions) {
        json rows = json::array();
        for (int r = 0; r < f.coeffs.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < f.coeffs.cols(); ++c) row.push_back(f.coeffs(r, c));
            rows.push_back(std::move(row));
        }
        functions.push_back({{"first_element", f.first}, {"bernstein", std::move(rows)}});
    }
    json z = json::array();
    for (const auto& e : basis.z) z.push_back({{"member", e.member}, {"column", e.column}, {"value", e.value}});
    return {
        {"degree", basis.knots().degree()},
        {"knots", std::vector<double>(k.begin(), k.end())},
        {"kind", to_string(basis.kind())},
        {"weight_mode", to_string(basis.mode())},
        {"crosspoints", {{"left", basis.flags().left}, {"right", basis.flags().right}}},
        {"retained", basis.retained},
        {"functions", std::move(functions)},
        {"scale", basis.scale},
        {"z", std::move(z)},
        {"log", basis.log},
    };
}

void write_json(const DualBasis& basis, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << to_json(basis).dump(2) << '\n';
}

}  // namespace dualmortar::dual
