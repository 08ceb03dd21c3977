#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualmortar/common/execution.hpp"
#include "dualmortar/common/sparse.hpp"
#include "dualmortar/dual/dual_basis.hpp"
#include "dualmortar/geometry/domain.hpp"

namespace dualmortar::mortar {

using geometry::InterfaceSpec;
using geometry::MultipatchDomain;

enum class MultiplierKind { standard, naive, optimal };

std::string to_string(MultiplierKind k);
/// Accepts "std", "standard", "naive", "ele_dual", "optimal".
MultiplierKind multiplier_kind_from_string(const std::string& s);
[[nodiscard]] inline bool is_dual(MultiplierKind k) { return k != MultiplierKind::standard; }

/// Restriction of a patch's rational basis to one face: R_a(t) = w_a N_a(t) / W(t).
class FaceTrace {
public:
    FaceTrace(const spline::NurbsPatch& patch, spline::Face face);

    struct Point {
        Eigen::Vector2d x;
        Eigen::Vector2d tangent;  ///< dF/dt
        double weight = 1.0;      ///< W(t)
    };

    [[nodiscard]] const spline::SplineSpace1D& space() const { return space_; }
    [[nodiscard]] int size() const { return static_cast<int>(controls_.size()); }
    /// Flat patch control indices in face-parameter order.
    [[nodiscard]] const std::vector<int>& controls() const { return controls_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }

    /// Rational values of the p+1 functions active on element e at t; returns the first index.
    int evaluate(int e, double t, Eigen::VectorXd& values) const;
    /// Curve point, tangent and weight function on element e.
    [[nodiscard]] Point geometry(int e, double t) const;

private:
    spline::SplineSpace1D space_;
    std::vector<int> controls_;
    std::vector<double> weights_;
    std::vector<Eigen::Vector2d> points_;
};

/// Inner product used to build multipliers on the slave face. Physical mode sets
/// rho_hat = |dF_s/dt| / W_s so that the coupling weight W_s rho_hat is the arc-length density.
dual::WeightedInnerProduct interface_inner_product(const MultipatchDomain& domain, const InterfaceSpec& iface,
                                                   int points_per_element = 0);

/// Interval of the slave face parameter that lies inside one slave element and one master
/// element; master parameters of its ends are stored alongside.
struct Segment {
    double slave0 = 0.0, slave1 = 0.0;
    double master0 = 0.0, master1 = 0.0;
};

/// Merged partition of the slave face by slave breakpoints and pulled-back master breakpoints.
std::vector<Segment> segment_interface(const MultipatchDomain& domain, const InterfaceSpec& iface);

/// Multiplier basis on the slave face, one function per retained slave trace function.
/// Dual kinds are piecewise polynomials. Standard multipliers are the retained rational trace
/// functions R_j (a removed boundary function added to its neighbour); they are stored as the
/// numerators w_j B_j and divided by W when evaluated.
struct MultiplierBasis {
    MultiplierKind kind = MultiplierKind::optimal;
    dual::WeightMode mode = dual::WeightMode::physical;
    dual::CrosspointFlags flags;
    std::vector<int> retained;  ///< slave trace indices carrying a multiplier
    std::vector<int> removed;   ///< slave trace indices without one
    std::vector<dual::PiecewisePolynomial> functions;
    spline::SplineSpace1D space{spline::KnotVector::uniform(1, 1)};
    std::vector<double> trace_weights;  ///< set for rational (standard) multipliers

    [[nodiscard]] int size() const { return static_cast<int>(functions.size()); }
    [[nodiscard]] bool rational() const { return !trace_weights.empty(); }
    [[nodiscard]] double evaluate(int j, double t) const;
};

/// `trace_weights` are the control weights of the slave face (used by the standard kind only).
MultiplierBasis make_multiplier(const spline::SplineSpace1D& space, const std::vector<double>& trace_weights,
                                dual::CrosspointFlags flags, MultiplierKind kind, const dual::WeightedInnerProduct& ip,
                                bool scaled = true);

struct CouplingOptions {
    int segment_points = 0;  ///< Gauss points per segment; 0 means 2p+3
    bool scaled = true;      ///< scale dual functions so that (B_i, psi_i) = (B_i, 1)
    Execution execution = Execution::serial;
};

/// Scalar coupling matrices of one interface for one displacement component.
/// Columns of M_SS and M_SX follow `multiplier.retained` and `multiplier.removed`;
/// columns of M_SM follow the master face trace.
struct CouplingMatrices {
    MultiplierBasis multiplier;
    /// off_diagonal_ratio of M_SS before entries below 1e-14 of the largest were dropped.
    double off_diagonal = 0.0;
    SparseMatrix M_SS;
    SparseMatrix M_SX;
    SparseMatrix M_SM;
    std::vector<Segment> segments;
    [[nodiscard]] MultiplierKind kind() const { return multiplier.kind; }
    [[nodiscard]] dual::WeightMode mode() const { return multiplier.mode; }
};

/// Builds the multiplier for `component` (crosspoint flags of that component) and assembles.
CouplingMatrices assemble_coupling(const MultipatchDomain& domain, const InterfaceSpec& iface, int component,
                                   MultiplierKind kind, const CouplingOptions& options = {});

/// Assembles with a prebuilt multiplier; its weight mode must match the interface's.
CouplingMatrices assemble_coupling(const MultipatchDomain& domain, const InterfaceSpec& iface,
                                   MultiplierBasis multiplier, const CouplingOptions& options = {});

/// Largest off-diagonal |entry| of M_SS relative to the largest diagonal |entry|.
double off_diagonal_ratio(const SparseMatrix& m);

/// P = M_SS^-1 M_SM and X = M_SS^-1 M_SX, so that the constraint reads u_S = P u_M - X u_X.
struct MortarProjection {
    SparseMatrix P;
    SparseMatrix X;
    bool diagonal = false;  ///< computed by diagonal scaling
};

/// Dual kinds use diagonal scaling (pattern of M_SM kept). The standard kind factorizes M_SS
/// and materializes dense rows. Singular M_SS raises a numerical error.
MortarProjection mortar_projection(const CouplingMatrices& cm);

}  // namespace dualmortar::mortar
