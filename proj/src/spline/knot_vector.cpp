#include "dualmortar/spline/knot_vector.hpp"

#include <algorithm>
#include <sstream>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::spline {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots))
{
    if (degree_ < 1) throw DomainError("KnotVector: degree must be >= 1");
    if (static_cast<int>(knots_.size()) < 2 * (degree_ + 1))
        throw DomainError("KnotVector: too few knots for the degree");
    if (!std::is_sorted(knots_.begin(), knots_.end()))
        throw DomainError("KnotVector: knots must be nondecreasing");
    if (knots_.front() == knots_.back()) throw DomainError("KnotVector: empty parameter range");

    breaks_.push_back(knots_.front());
    mults_.push_back(0);
    for (double k : knots_) {
        if (k != breaks_.back()) {
            breaks_.push_back(k);
            mults_.push_back(0);
        }
        ++mults_.back();
    }
    if (mults_.front() != degree_ + 1 || mults_.back() != degree_ + 1)
        throw DomainError("KnotVector: knot vector must be open (end multiplicity p+1)");
    for (std::size_t i = 1; i + 1 < mults_.size(); ++i) {
        if (mults_[i] > degree_) {
            std::ostringstream msg;
            msg << "KnotVector: interior knot " << breaks_[i] << " has multiplicity " << mults_[i]
                << " > degree " << degree_;
            throw DomainError(msg.str());
        }
    }
    if (num_basis() < degree_ + 1) throw DomainError("KnotVector: fewer than p+1 basis functions");

    elem_span_.resize(breaks_.size() - 1);
    int acc = 0;
    for (std::size_t e = 0; e + 1 < breaks_.size(); ++e) {
        acc += mults_[e];
        elem_span_[e] = acc - 1;
    }
}

KnotVector KnotVector::uniform(int degree, int elements, double a, double b)
{
    if (elements < 1) throw DomainError("KnotVector::uniform: need at least one element");
    std::vector<double> knots(degree + 1, a);
    for (int e = 1; e < elements; ++e) knots.push_back(a + (b - a) * e / elements);
    knots.insert(knots.end(), degree + 1, b);
    return KnotVector(degree, std::move(knots));
}

KnotVector KnotVector::from_breakpoints(int degree, std::span<const double> breakpoints,
                                        std::span<const int> interior_multiplicities)
{
    if (breakpoints.size() < 2 || interior_multiplicities.size() + 2 != breakpoints.size())
        throw DomainError("KnotVector::from_breakpoints: inconsistent sizes");
    std::vector<double> knots(degree + 1, breakpoints.front());
    for (std::size_t i = 1; i + 1 < breakpoints.size(); ++i)
        knots.insert(knots.end(), interior_multiplicities[i - 1], breakpoints[i]);
    knots.insert(knots.end(), degree + 1, breakpoints.back());
    return KnotVector(degree, std::move(knots));
}

int KnotVector::element_of(double x) const
{
    if (!(x >= lower() && x <= upper())) {
        std::ostringstream msg;
        msg << "KnotVector: evaluation point " << x << " outside [" << lower() << ", " << upper()
            << "]";
        throw DomainError(msg.str());
    }
    if (x == upper()) return num_elements() - 1;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<int>(it - breaks_.begin()) - 1;
}

std::pair<int, int> KnotVector::support(int i) const
{
    const double a = knots_[i];
    const double b = knots_[i + degree_ + 1];
    const int first = static_cast<int>(std::lower_bound(breaks_.begin(), breaks_.end(), a) - breaks_.begin());
    const int end = static_cast<int>(std::lower_bound(breaks_.begin(), breaks_.end(), b) - breaks_.begin());
    return {first, end - 1};
}

std::vector<double> KnotVector::subdivision_knots(int parts) const
{
    if (parts < 1) throw DomainError("KnotVector::subdivided: parts must be >= 1");
    std::vector<double> added;
    for (int e = 0; e < num_elements(); ++e) {
        const double a = breaks_[e], b = breaks_[e + 1];
        for (int k = 1; k < parts; ++k) added.push_back(a + (b - a) * k / parts);
    }
    return added;
}

KnotVector KnotVector::refined(int levels) const
{
    if (levels < 0) throw DomainError("KnotVector::refined: levels must be >= 0");
    return subdivided(1 << levels);
}

KnotVector KnotVector::subdivided(int parts) const
{
    std::vector<double> knots = knots_;
    const auto added = subdivision_knots(parts);
    knots.insert(knots.end(), added.begin(), added.end());
    std::sort(knots.begin(), knots.end());
    return KnotVector(degree_, std::move(knots));
}

}  // namespace dualmortar::spline
