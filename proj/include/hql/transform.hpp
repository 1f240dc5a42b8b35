#pragma once

#include <Eigen/Dense>

#include "hql/grid.hpp"
#include "hql/spectral.hpp"

namespace hql::transform {

using grid::Grid;
using grid::GridFunction;
using spectral::SymMatrix;

/// q(x) = 1/2 x^T A x + b^T x + c with A symmetric.
struct QuadraticForm {
    SymMatrix A;
    Eigen::VectorXd b;
    double c = 0.0;

    QuadraticForm(SymMatrix a, Eigen::VectorXd b, double c);
    /// Pure second-order form 1/2 x^T A x.
    explicit QuadraticForm(SymMatrix a);

    int dim() const { return A.dim(); }
    double operator()(const Eigen::VectorXd& x) const;
};

/// Sample q at every node of the grid. The discrete Hessian of the sampled
/// field recovers A exactly at interior nodes.
GridFunction eval_quadratic(const QuadraticForm& q, const Grid& g);

/// v(x) = u(x) - |x|^2 / (2(n-1)) at every node, n the grid dimension.
/// This is the substitution that turns a quotient-1 solution into a
/// sigma_2 = n/(2(n-1)) solution; it commutes with the discrete Hessian
/// because the correction is a pure quadratic.
GridFunction subtract_reduction_quadratic(const GridFunction& u);

/// S - I/(n-1), the Hessian-level counterpart of
/// subtract_reduction_quadratic. Requires n == S.dim().
SymMatrix hessian_shift(const SymMatrix& s, int n);

/// Discrete Legendre-Fenchel conjugate of a strictly convex grid function.
///
/// The conjugate w(y) = max over grid nodes x of (<x,y> - u(x)) is sampled
/// on a uniform grid over the bounding box of the discrete gradient range
/// (central differences at interior nodes), with the same node count per
/// axis as the input. Values are second-order accurate on the whole output
/// box, but second derivatives of w are only faithful where the maximizing
/// x stays away from the boundary of the input grid; `usable_margin` nodes
/// per side are trimmed to form the sub-window on which Hessian-level
/// identities should be measured.
struct LegendreResult {
    GridFunction conjugate;
    int usable_margin = 0;

    /// Index range [usable_margin, m-1-usable_margin] per axis.
    bool in_window(const std::vector<int>& idx) const;
};

/// Computes the conjugate. When check_convexity is set, every interior
/// discrete Hessian of u must be positive definite; a violation throws
/// std::domain_error listing the offending nodes.
LegendreResult discrete_legendre(const GridFunction& u, bool check_convexity = true);

}  // namespace hql::transform
