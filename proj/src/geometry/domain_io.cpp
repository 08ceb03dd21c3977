#include "dualmortar/geometry/domain_io.hpp"

#include <fstream>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::geometry {

namespace {

using nlohmann::json;

json face_json(const FaceRef& f) { return {{"patch", f.patch}, {"face", spline::to_string(f.face)}}; }

FaceRef face_ref(const json& j) { return {j.at("patch").get<int>(), spline::face_from_string(j.at("face"))}; }

json flags_json(const dual::CrosspointFlags& f) { return {{"left", f.left}, {"right", f.right}}; }

dual::CrosspointFlags flags_from(const json& j) { return {j.at("left").get<bool>(), j.at("right").get<bool>()}; }

}  // namespace

json to_json(const MultipatchDomain& domain)
{
    json patches = json::array();
    for (int k = 0; k < domain.num_patches(); ++k) {
        const NurbsPatch& p = domain.patches[k];
        json knots = json::array();
        for (int dir = 0; dir < 2; ++dir) {
            const auto kv = p.space(dir).knots().knots();
            knots.push_back(std::vector<double>(kv.begin(), kv.end()));
        }
        json cps = json::array();
        for (const auto& c : p.controls()) cps.push_back({c.x(), c.y()});
        patches.push_back({{"degree", {p.space(0).degree(), p.space(1).degree()}},
                           {"knots", std::move(knots)},
                           {"control_points", std::move(cps)},
                           {"weights", p.weights()},
                           {"region", domain.regions[k]}});
    }
    json boundaries = json::array();
    for (int k = 0; k < domain.num_patches(); ++k)
        for (Face f : {Face::west, Face::east, Face::south, Face::north}) {
            const BoundaryTag& t = domain.boundary(k, f);
            if (t.kind == BoundaryKind::free) continue;
            boundaries.push_back({{"patch", k},
                                  {"face", spline::to_string(f)},
                                  {"kind", to_string(t.kind)},
                                  {"components", {t.components[0], t.components[1]}},
                                  {"data", t.data}});
        }
    json interfaces = json::array();
    for (const auto& i : domain.interfaces)
        interfaces.push_back({{"slave", face_json(i.slave)},
                              {"master", face_json(i.master)},
                              {"orientation", i.orientation},
                              {"weight", dual::to_string(i.weight)},
                              {"crosspoints", {{"x", flags_json(i.crosspoints[0])}, {"y", flags_json(i.crosspoints[1])}}}});
    return {{"patches", std::move(patches)}, {"boundaries", std::move(boundaries)}, {"interfaces", std::move(interfaces)}};
}

MultipatchDomain domain_from_json(const json& j)
{
    MultipatchDomain d;
    bool detect = false;
    try {
        for (const auto& pj : j.at("patches")) {
            const auto deg = pj.at("degree").get<std::vector<int>>();
            const auto knots = pj.at("knots").get<std::vector<std::vector<double>>>();
            if (deg.size() != 2 || knots.size() != 2) throw ConfigError("patch needs two degrees and two knot vectors");
            std::vector<Eigen::Vector2d> cps;
            for (const auto& c : pj.at("control_points")) cps.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
            auto weights = pj.contains("weights") ? pj.at("weights").get<std::vector<double>>()
                                                  : std::vector<double>(cps.size(), 1.0);
            d.add_patch(NurbsPatch(spline::SplineSpace1D(spline::KnotVector(deg[0], knots[0])),
                                   spline::SplineSpace1D(spline::KnotVector(deg[1], knots[1])), std::move(cps),
                                   std::move(weights)),
                        pj.value("region", "default"));
        }
        for (const auto& bj : j.value("boundaries", json::array())) {
            const int k = bj.at("patch").get<int>();
            if (k < 0 || k >= d.num_patches()) throw ConfigError("boundary refers to unknown patch " + std::to_string(k));
            BoundaryTag& t = d.boundary(k, spline::face_from_string(bj.at("face")));
            t.kind = boundary_kind_from_string(bj.at("kind"));
            if (bj.contains("components")) t.components = {bj["components"].at(0).get<bool>(), bj["components"].at(1).get<bool>()};
            t.data = bj.value("data", "zero");
        }
        for (const auto& ij : j.value("interfaces", json::array())) {
            InterfaceSpec i;
            i.slave = face_ref(ij.at("slave"));
            i.master = face_ref(ij.at("master"));
            for (const FaceRef& f : {i.slave, i.master})
                if (f.patch < 0 || f.patch >= d.num_patches()) throw ConfigError("interface refers to an unknown patch");
            i.orientation = ij.value("orientation", 1);
            i.weight = dual::weight_mode_from_string(ij.value("weight", "physical"));
            if (ij.contains("crosspoints")) {
                i.crosspoints[0] = flags_from(ij["crosspoints"].at("x"));
                i.crosspoints[1] = flags_from(ij["crosspoints"].at("y"));
            } else {
                detect = true;
            }
            d.interfaces.push_back(i);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed domain description: ") + e.what());
    }
    if (detect) apply_crosspoints(d);
    return d;
}

void write_domain(const MultipatchDomain& domain, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << to_json(domain).dump(2) << '\n';
}

MultipatchDomain read_domain(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open domain file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("domain file '" + path + "': " + e.what());
    }
    return domain_from_json(j);
}

}  // namespace dualmortar::geometry
