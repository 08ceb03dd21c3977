#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualmortar/dual/broken_basis.hpp"
#include "dualmortar/dual/inner_product.hpp"
#include "dualmortar/spline/nurbs_patch.hpp"

namespace dualmortar::geometry {

using spline::Face;
using spline::NurbsPatch;

enum class BoundaryKind { free, neumann, dirichlet };

std::string to_string(BoundaryKind k);
BoundaryKind boundary_kind_from_string(const std::string& s);

/// Boundary condition attached to one patch face.
struct BoundaryTag {
    BoundaryKind kind = BoundaryKind::free;
    /// Dirichlet: which displacement components are prescribed.
    std::array<bool, 2> components{true, true};
    /// Name of the data resolved by the problem setup ("zero", "exact", "pressure", ...).
    std::string data = "zero";
};

struct FaceRef {
    int patch = 0;
    Face face = Face::west;
    friend bool operator==(const FaceRef&, const FaceRef&) = default;
};

/// One interface; the slave face carries the multiplier.
struct InterfaceSpec {
    FaceRef slave;
    FaceRef master;
    /// +1 if both face parameters run in the same physical direction, -1 otherwise.
    int orientation = 1;
    /// Crosspoint flags per displacement component, in slave face parameter order.
    std::array<dual::CrosspointFlags, 2> crosspoints{};
    dual::WeightMode weight = dual::WeightMode::physical;
};

class MultipatchDomain {
public:
    std::vector<NurbsPatch> patches;
    std::vector<std::array<BoundaryTag, 4>> boundaries;  ///< per patch, indexed by Face
    std::vector<InterfaceSpec> interfaces;
    std::vector<std::string> regions;  ///< per patch label, e.g. for material lookup

    void add_patch(NurbsPatch patch, std::string region = "default");
    [[nodiscard]] int num_patches() const { return static_cast<int>(patches.size()); }
    [[nodiscard]] BoundaryTag& boundary(int patch, Face f) { return boundaries[patch][static_cast<int>(f)]; }
    [[nodiscard]] const BoundaryTag& boundary(int patch, Face f) const { return boundaries[patch][static_cast<int>(f)]; }

    [[nodiscard]] double diameter() const;
    [[nodiscard]] double tolerance() const { return 1e-10 * diameter(); }

    /// Physical point of a face at face parameter t.
    [[nodiscard]] Eigen::Vector2d face_point(const FaceRef& f, double t) const;

    /// Uniform bisection of every element, `levels` times.
    [[nodiscard]] MultipatchDomain refined(int levels) const;

    /// Jacobian positivity at the Gauss points of every element and geometric interface matching.
    void validate() const;
};

/// Face parameter of the point of face f closest to x. Safeguarded Gauss-Newton with a monotone
/// bracket on [0, 1]; reports the remaining distance.
struct FaceProjection {
    double t = 0.0;
    double distance = 0.0;
    int iterations = 0;
};
FaceProjection project_to_face(const NurbsPatch& patch, Face f, const Eigen::Vector2d& x, double guess,
                               double tol, int max_iterations = 50);

/// Master face parameter of the image of slave face parameter ts; geometry error if the
/// residual stays above the domain tolerance. A guess outside [0, 1] starts Newton from the
/// orientation-adjusted input parameter.
double pullback_to_master(const MultipatchDomain& domain, const InterfaceSpec& iface, double ts, double guess = -1.0);
/// Inverse direction: slave face parameter of master face parameter tm.
double pullback_to_slave(const MultipatchDomain& domain, const InterfaceSpec& iface, double tm, double guess = -1.0);

/// Per-interface flags: an endpoint is flagged for every component prescribed on a Dirichlet
/// face through it, and for both components if it touches another interface.
std::vector<std::array<dual::CrosspointFlags, 2>> detect_crosspoints(const MultipatchDomain& domain);

/// Stores the detected flags in the interfaces.
void apply_crosspoints(MultipatchDomain& domain);

}  // namespace dualmortar::geometry
