#pragma once

#include <span>
#include <utility>
#include <vector>

namespace dualmortar::spline {

/// Open knot vector of a univariate spline space.
///
/// Indices are zero-based throughout: basis functions 0..n-1, elements
/// 0..num_elements()-1 with element e spanning [breakpoint(e), breakpoint(e+1)].
class KnotVector {
public:
    KnotVector(int degree, std::vector<double> knots);

    /// Open knot vector on [a, b] with `elements` equal elements and simple interior knots.
    static KnotVector uniform(int degree, int elements, double a = 0.0, double b = 1.0);

    /// Open knot vector with the given interior breakpoints, each with the given multiplicity.
    static KnotVector from_breakpoints(int degree, std::span<const double> breakpoints,
                                       std::span<const int> interior_multiplicities);

    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] std::span<const double> knots() const { return knots_; }
    [[nodiscard]] double knot(int i) const { return knots_[i]; }
    [[nodiscard]] int num_basis() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    [[nodiscard]] int num_elements() const { return static_cast<int>(breaks_.size()) - 1; }
    [[nodiscard]] std::span<const double> breakpoints() const { return breaks_; }
    [[nodiscard]] double breakpoint(int e) const { return breaks_[e]; }
    [[nodiscard]] std::span<const int> multiplicities() const { return mults_; }
    [[nodiscard]] double lower() const { return knots_.front(); }
    [[nodiscard]] double upper() const { return knots_.back(); }

    /// Element containing x; right-continuous except at the upper end.
    [[nodiscard]] int element_of(double x) const;
    /// Knot span index mu with knot(mu) <= x < knot(mu+1) for element e.
    [[nodiscard]] int span_of_element(int e) const { return elem_span_[e]; }
    /// First basis function active on element e (p+1 consecutive are active).
    [[nodiscard]] int first_active(int e) const { return elem_span_[e] - degree_; }
    /// Closed range of elements [first, last] on which basis function i is nonzero.
    [[nodiscard]] std::pair<int, int> support(int i) const;

    /// Every element split into 2^levels equal parts; existing knots keep their multiplicity.
    [[nodiscard]] KnotVector refined(int levels) const;
    /// Every element split into `parts` equal parts.
    [[nodiscard]] KnotVector subdivided(int parts) const;
    /// Knots that `subdivided(parts)` adds, in increasing order.
    [[nodiscard]] std::vector<double> subdivision_knots(int parts) const;

    friend bool operator==(const KnotVector&, const KnotVector&) = default;

private:
    int degree_;
    std::vector<double> knots_;
    std::vector<double> breaks_;
    std::vector<int> mults_;
    std::vector<int> elem_span_;
};

}  // namespace dualmortar::spline
