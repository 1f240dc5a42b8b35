#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hql/grid.hpp"
#include "hql/pde.hpp"
#include "hql/transform.hpp"

namespace hql::analysis {

using grid::Grid;
using grid::GridFunction;

/// The dimensional constant (sqrt(3n^2+1) - n + 1) / (2n) that weights the
/// Laplacian term in the interior-estimate condition. Strictly decreasing
/// in n with limit (sqrt(3)-1)/2. Requires n >= 2.
double c_of_n(int n);

/// min over interior nodes of
///   lambda_min(D^2 u) - 1/(n-1) + c(n) * (trace(D^2 u) - n/(n-1)).
/// Nonnegative means the discrete field satisfies the semi-convexity-type
/// hypothesis of the interior estimate. Adding an affine function to u
/// leaves the value unchanged.
double interior_condition_margin(const GridFunction& u);

/// Result of the quadratic least-squares probe: if the field is secretly a
/// quadratic polynomial, fit_residual and hessian_spread both vanish to
/// rounding, which is the desk-scale face of the rigidity statement.
struct RigidityReport {
    transform::QuadraticForm fitted;
    double fit_residual = 0.0;    // sup-norm of u - fitted over all nodes
    double hessian_spread = 0.0;  // max over interior nodes of max|D^2 u - A_fit|
};

/// Least-squares fit of q(x) = 1/2 x^T A x + b^T x + c over all nodes.
/// Throws std::domain_error when the node set cannot determine the
/// coefficients (rank-deficient design matrix).
RigidityReport fit_quadratic(const GridFunction& u);

/// Boundary-data families for the experiment layer. All are smooth; the
/// cosine and quartic kinds perturb the admissible base quadratic
/// a|x|^2/2 and produce genuinely non-quadratic solutions.
enum class BoundaryKind { quadratic, cosine, quartic };

struct BoundaryFamily {
    std::string id;
    BoundaryKind kind = BoundaryKind::quadratic;
    /// quadratic kind: the exact form to sample.
    std::optional<transform::QuadraticForm> form;
    /// cosine/quartic kinds: base coefficient a and perturbation size.
    ///   cosine : a|x|^2/2 + eps * cos(x_1 + ... + x_n)
    ///   quartic: a|x|^2/2 + eps * (x_1^4 + ... + x_n^4)
    double base = 1.0;
    double eps = 0.0;

    /// Tabulates the family on every node of the grid.
    Eigen::VectorXd sample(const Grid& g) const;
};

struct InteriorConfig {
    int n = 2;
    std::vector<int> resolutions;  // odd node counts per axis, ascending
    double extent = 1.0;
    pde::OperatorKind op = pde::OperatorKind::quotient21;
    double rhs = 1.0;
    int continuation_steps = 4;
    std::vector<BoundaryFamily> families;
    /// A run is flagged "estimate-stress" when hess0_max exceeds this
    /// multiple of the measured Lipschitz norm.
    double stress_multiple = 10.0;
    /// Worker threads for the batch. Runs are independent and each writes
    /// only its own slot, so the report is identical for any count.
    int threads = 1;
};

/// One solve of the experiment. Failed solves keep the batch alive: ok is
/// false, `failure` names the cause and the numeric fields are NaN.
struct InteriorRun {
    std::string run_id;
    int n = 0;
    int m = 0;
    double extent = 0.0;
    std::string boundary_id;
    bool ok = false;
    std::string failure;
    double lip_norm = 0.0;        // max edge |du|/h + sup|u|
    double hess0_max = 0.0;       // max |entry| of D^2 u at the origin
    double hess0_spec = 0.0;      // spectral radius of D^2 u at the origin
    double k_semiconvex = 0.0;    // max over interior of max(0, -lambda_min)
    double condition_margin = 0.0;
    int newton_iters = 0;
    double final_residual = 0.0;
    double center_value = 0.0;    // u(0), for refinement studies
    bool stress_flag = false;
};

struct InteriorReport {
    std::vector<InteriorRun> runs;

    /// Exact persisted schema, one row per run in config order:
    /// run_id,n,m,L,boundary_id,lip_norm,hess0_max,hess0_spec,K_semiconvex,
    /// thm31_margin,newton_iters,final_residual
    std::string to_csv() const;
};

/// Runs every (family, resolution) pair in config order: solve, then record
/// the Lipschitz estimate, the origin Hessian in both norms, the
/// semi-convexity constant K, and the interior-condition margin.
InteriorReport interior_estimate_experiment(const InteriorConfig& config);

/// max over grid edges of |u(p) - u(q)|/h plus sup|u|: the discrete
/// Lipschitz-norm proxy used by the experiment.
double lipschitz_estimate(const GridFunction& u);

}  // namespace hql::analysis
