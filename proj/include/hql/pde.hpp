#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hql/grid.hpp"
#include "hql/spectral.hpp"

namespace hql::pde {

using grid::Grid;
using grid::GridFunction;
using grid::InteriorMap;
using spectral::SymMatrix;

/// The two scalar operators the solver handles, applied to the eigenvalues
/// of the discrete Hessian: the quotient sigma_2/sigma_1 and plain sigma_2.
enum class OperatorKind { quotient21, sigma2 };

std::string to_string(OperatorKind op);

/// Dirichlet problem operator(D^2 u) = rhs on a solver grid. Boundary data
/// are tabulated: `boundary` holds one value per grid node and only the
/// boundary entries are consulted (interior entries are ignored), which
/// lets callers pass a full sampled field without masking it first.
struct ProblemSpec {
    Grid grid;
    OperatorKind op = OperatorKind::quotient21;
    double rhs = 1.0;
    Eigen::VectorXd boundary;
    int continuation_steps = 4;

    ProblemSpec(Grid g, OperatorKind op, double rhs, Eigen::VectorXd boundary,
                int continuation_steps = 4);
};

/// Convergence record for one newton_solve() call. `residual_history` has
/// one entry per accepted iterate (the initial guess included), so its
/// length is iterations + 1 when no continuation is used. Wall time is kept
/// for interactive display only and is never written into persisted
/// artifacts, which must be byte-reproducible.
struct SolveReport {
    int iterations = 0;
    std::vector<double> residual_history;
    double final_residual = 0.0;
    double admissibility_margin = 0.0;
    std::vector<int> damping_history;
    std::vector<int> stage_iterations;
    double wall_seconds = 0.0;
};

enum class SolveFailure { non_admissible_start, stagnation, linear_solve_failure, iteration_cap };

std::string to_string(SolveFailure kind);

/// Thrown by newton_solve(); carries the partial report for diagnostics.
class SolveError : public std::runtime_error {
public:
    SolveError(SolveFailure kind, const std::string& what, SolveReport report)
        : std::runtime_error(what), kind_(kind), report_(std::move(report)) {}

    SolveFailure kind() const { return kind_; }
    const SolveReport& report() const { return report_; }

private:
    SolveFailure kind_;
    SolveReport report_;
};

/// Second-order discrete Hessian at an interior node: diagonal entries
/// (u(x+h e_i) - 2u(x) + u(x-h e_i)) / h_i^2, off-diagonal entries the
/// four-point cross stencil / (4 h_i h_j). Exact on quadratic polynomials.
/// Throws std::domain_error at boundary-layer nodes.
SymMatrix discrete_hessian(const GridFunction& u, const std::vector<int>& node);
SymMatrix discrete_hessian(const GridFunction& u, std::int64_t flat);

/// operator(D^2 u) - rhs at every interior node, ordered by InteriorMap
/// ordinal. Throws std::domain_error if any interior node leaves the
/// admissible cone, naming the worst node and its spectrum.
Eigen::VectorXd residual(const GridFunction& u, const ProblemSpec& spec);

/// Jacobian of residual() with respect to the interior values, frozen at u.
/// At each interior node the local linearization is the matrix
///   F = Q diag(f(lambda)) Q^T
/// from the eigendecomposition of the discrete Hessian, with f the gradient
/// of the scalar operator; composing F with the Hessian stencil gives the
/// sparse coefficients. Supports matrix-free application and explicit
/// assembly.
class Linearization {
public:
    Linearization(const GridFunction& u, const ProblemSpec& spec);

    const InteriorMap& interior() const { return map_; }

    /// Action on an interior vector, Dirichlet-extended by zero.
    Eigen::VectorXd apply(const Eigen::VectorXd& w_interior) const;

    /// Action on a full grid function, using its boundary values too. The
    /// image of a sampled quadratic perturbation 1/2 x^T B x is the
    /// pointwise contraction sum_ij F^ij B_ij, exactly up to rounding.
    Eigen::VectorXd apply_full(const GridFunction& w) const;

    /// Explicit interior-by-interior sparse matrix, rows and columns in
    /// InteriorMap ordinal order.
    Eigen::SparseMatrix<double> assemble() const;

private:
    Grid grid_;
    InteriorMap map_;
    std::vector<Eigen::MatrixXd> coeff_;  // F per interior node, ordinal order
};

/// Damped Newton solve with admissibility safeguarding and continuation in
/// the boundary data. Initialization is the admissible quadratic a|x|^2/2
/// whose operator value matches rhs exactly; the boundary is blended from
/// that quadratic's own trace to the target over `continuation_steps`
/// stages. Each stage starts from the previous iterate plus the discrete
/// harmonic lift of its boundary increment (writing the increment on the
/// trace alone would kick boundary-adjacent Hessians by increment/h^2), and
/// runs Newton with a backtracking line search that halves the step until
/// the iterate stays strictly admissible (margin >= 1e-12) and the residual
/// sup-norm shrinks by factor <= 0.9, at most 40 halvings. A stage that
/// starts outside the cone or stalls is retried with half the boundary
/// increment, down to 1/64 of the nominal step. Caps: 50 iterations per
/// stage; success means final-stage residual sup-norm <= 1e-10 * (1 + rhs).
/// After convergence one undamped polishing step is attempted and kept only
/// if it reduces the residual, which lands quadratic fixtures at rounding
/// level. Failures throw SolveError; there is no silent partial result.
std::pair<GridFunction, SolveReport> newton_solve(const ProblemSpec& spec);

}  // namespace hql::pde
