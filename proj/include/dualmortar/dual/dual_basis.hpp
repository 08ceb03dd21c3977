#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualmortar/dual/broken_basis.hpp"
#include "dualmortar/dual/inner_product.hpp"

namespace dualmortar::dual {

/// Element-wise duals of every broken basis member: (psi[a], member(b)) = delta_ab.
struct NaiveDualTable {
    std::vector<PiecewisePolynomial> psi;
};

NaiveDualTable build_naive_dual(const BrokenBasis& broken, const ElementQuadrature& quad);

/// Local index set of one extra member.
struct IndexSetChoice {
    std::vector<int> bsplines;  ///< retained B-spline indices, ascending
    int central_element = 0;    ///< element the set was read from
    int shift = 0;              ///< elements moved away from the geometric centre
    bool reduced = false;       ///< fewer than p+1 indices; polynomial degree lowered to match
};

IndexSetChoice choose_index_set(const BrokenBasis& broken, const NaiveDualTable& naive, int member);

enum class DualKind { naive_element, optimal };
enum class PolyBasis { legendre, monomial };

std::string to_string(DualKind k);
DualKind dual_kind_from_string(const std::string& s);

/// Biorthogonal multiplier basis on the retained B-splines of a slave space.
///
/// psi_j = c_j / d_j (naive[retained_j] + sum_k z_kj naive[k]) with d_j the unscaled
/// pairing (B_j, psi_j); an unscaled basis has c_j = 1.
class DualBasis {
public:
    struct ZEntry {
        int member;  ///< broken basis member index (extra)
        int column;  ///< position in retained()
        double value;
    };

    DualBasis(spline::SplineSpace1D space, DualKind kind, WeightMode mode, CrosspointFlags flags)
        : space_(std::move(space)), kind_(kind), mode_(mode), flags_(flags)
    {
    }

    [[nodiscard]] const spline::SplineSpace1D& space() const { return space_; }
    [[nodiscard]] const spline::KnotVector& knots() const { return space_.knots(); }
    [[nodiscard]] DualKind kind() const { return kind_; }
    [[nodiscard]] WeightMode mode() const { return mode_; }
    [[nodiscard]] CrosspointFlags flags() const { return flags_; }
    [[nodiscard]] int size() const { return static_cast<int>(retained.size()); }
    [[nodiscard]] double evaluate(int j, double x) const { return functions[j].evaluate(knots(), x); }

    std::vector<int> retained;
    std::vector<PiecewisePolynomial> functions;
    std::vector<double> scale;
    std::vector<ZEntry> z;
    std::vector<std::string> log;

private:
    spline::SplineSpace1D space_;
    DualKind kind_;
    WeightMode mode_;
    CrosspointFlags flags_;
};

DualBasis build_optimal_dual(const BrokenBasis& broken, const NaiveDualTable& naive, const ElementQuadrature& quad,
                             PolyBasis poly = PolyBasis::legendre);

/// Element-wise dual of the retained B-splines: on each element of supp B_i the local dual of
/// B_i weighted by that element's share of int B_i. A removed boundary B-spline hands its dual
/// to the adjacent retained one.
DualBasis build_element_dual(const BrokenBasis& broken, const NaiveDualTable& naive, const ElementQuadrature& quad);

/// Rescale so that (B_i, psi_j) = delta_ij (B_i, 1).
DualBasis scale_dual(DualBasis basis, const ElementQuadrature& quad);

/// Broken basis, naive table and the requested kind in one call.
DualBasis make_dual_basis(const spline::SplineSpace1D& space, CrosspointFlags flags, DualKind kind,
                          const WeightedInnerProduct& ip, bool scaled = true);

/// G(a, b) = (B_{retained a}, psi_b).
Eigen::MatrixXd coupling_gram(const DualBasis& basis, const ElementQuadrature& quad);

/// Largest off-diagonal coupling entry relative to the largest diagonal one, and the
/// largest diagonal deviation from the scaling constants (same relative measure).
struct BiorthogonalityReport {
    double off_diagonal = 0.0;
    double diagonal = 0.0;
    [[nodiscard]] double worst() const { return std::max(off_diagonal, diagonal); }
};
BiorthogonalityReport check_biorthogonality(const DualBasis& basis, const ElementQuadrature& quad);

/// Q f = sum_i (f, B_i) / c_i psi_i.
class QuasiInterpolant {
public:
    QuasiInterpolant(DualBasis basis, std::vector<double> coefficients)
        : basis_(std::move(basis)), coeffs_(std::move(coefficients))
    {
    }
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] const std::vector<double>& coefficients() const { return coeffs_; }

private:
    DualBasis basis_;
    std::vector<double> coeffs_;
};

QuasiInterpolant quasi_interpolate(const DualBasis& basis, const std::function<double(double)>& f,
                                   const ElementQuadrature& quad);

}  // namespace dualmortar::dual
