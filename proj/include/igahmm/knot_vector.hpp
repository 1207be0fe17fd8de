#pragma once

#include <vector>

#include <Eigen/Core>

namespace igahmm {

/// Open, non-decreasing knot vector of a degree-p spline basis.
///
/// The parameter range is rescaled affinely to [0, 1] on construction, so
/// every patch in the library lives on the unit parameter square. The first
/// and last knots must be repeated exactly p+1 times and no interior knot may
/// exceed multiplicity p (multiplicity k gives C^{p-k} continuity there).
class KnotVector {
public:
    KnotVector() = default;
    KnotVector(std::vector<double> knots, int degree);

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(knots_.size()); }
    int num_basis() const { return size() - degree_ - 1; }
    double operator[](int i) const { return knots_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& knots() const { return knots_; }

    std::vector<double> unique_knots() const;
    int multiplicity(double value) const;

    /// Index i with knots[i] <= xi < knots[i+1]; the last non-empty span at xi == 1.
    /// Throws GeometryError outside [0, 1].
    int find_span(double xi) const;

    /// Span indices i with knots[i] < knots[i+1], in increasing order.
    std::vector<int> element_spans() const;

    /// Greville abscissae (knot averages), one per basis function.
    Eigen::VectorXd greville() const;

    bool operator==(const KnotVector& other) const = default;

private:
    std::vector<double> knots_;
    int degree_ = 0;
};

/// The p+1 non-zero basis functions on one knot span.
struct BasisSpan {
    int first_index = 0;     ///< global index of values[0]
    Eigen::VectorXd values;  ///< N_{first..first+p}(xi)
    Eigen::VectorXd derivs;  ///< dN/dxi
};

/// Cox-de Boor evaluation of the non-zero basis functions and first derivatives.
BasisSpan eval_basis(const KnotVector& kv, double xi);

/// Same as eval_basis but on a precomputed span.
BasisSpan eval_basis(const KnotVector& kv, int span, double xi);

}  // namespace igahmm
