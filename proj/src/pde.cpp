#include "hql/pde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/SparseLU>

#include "hql/symfun.hpp"

namespace hql::pde {

using symfun::Spectrum;

std::string to_string(OperatorKind op) {
    return op == OperatorKind::quotient21 ? "quotient21" : "sigma2";
}

std::string to_string(SolveFailure kind) {
    switch (kind) {
        case SolveFailure::non_admissible_start: return "non_admissible_start";
        case SolveFailure::stagnation: return "stagnation";
        case SolveFailure::linear_solve_failure: return "linear_solve_failure";
        case SolveFailure::iteration_cap: return "iteration_cap";
    }
    return "unknown";
}

ProblemSpec::ProblemSpec(Grid g, OperatorKind op_in, double rhs_in, Eigen::VectorXd boundary_in,
                         int continuation_steps_in)
    : grid(std::move(g)),
      op(op_in),
      rhs(rhs_in),
      boundary(std::move(boundary_in)),
      continuation_steps(continuation_steps_in) {
    if (!grid.is_solver_grid()) {
        throw std::domain_error("ProblemSpec: solves need a symmetric solver grid (odd m >= 5)");
    }
    if (grid.dim() != 2 && grid.dim() != 3) {
        throw std::domain_error("ProblemSpec: solves support dimension 2 or 3, got " +
                                std::to_string(grid.dim()));
    }
    if (!(rhs > 0.0) || !std::isfinite(rhs)) {
        throw std::domain_error("ProblemSpec: rhs must be a positive finite constant");
    }
    if (boundary.size() != grid.node_count()) {
        throw std::domain_error("ProblemSpec: boundary table has " +
                                std::to_string(boundary.size()) + " values, expected " +
                                std::to_string(grid.node_count()));
    }
    if (!boundary.allFinite()) {
        throw std::domain_error("ProblemSpec: boundary data must be finite");
    }
    if (continuation_steps < 1) {
        throw std::domain_error("ProblemSpec: continuation_steps must be >= 1");
    }
}

namespace {

constexpr double kLineSearchMargin = 1e-12;  // strict-admissibility floor per iterate
constexpr double kDecreaseFactor = 0.9;      // required residual shrink per accepted step
constexpr int kMaxHalvings = 40;
constexpr int kMaxIterations = 50;  // per continuation stage

/// Row-major strides and spacings for direct neighbor arithmetic; valid at
/// interior nodes where every stencil neighbor exists.
struct StencilContext {
    int n = 0;
    std::vector<std::int64_t> stride;
    std::vector<double> inv_h2;    // 1/h_i^2
    std::vector<double> inv_4hh;   // 1/(4 h_i h_j), row-major n*n

    explicit StencilContext(const Grid& g) : n(g.dim()), stride(g.dim()), inv_h2(g.dim()) {
        stride[n - 1] = 1;
        for (int d = n - 2; d >= 0; --d) stride[d] = stride[d + 1] * g.nodes_per_axis();
        for (int d = 0; d < n; ++d) inv_h2[d] = 1.0 / (g.spacing(d) * g.spacing(d));
        inv_4hh.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                inv_4hh[static_cast<std::size_t>(i) * n + j] =
                    1.0 / (4.0 * g.spacing(i) * g.spacing(j));
    }

    /// Discrete Hessian at interior node `flat`, reading values through
    /// `val(flat_index)`.
    template <class Get>
    void hessian(Get&& val, std::int64_t flat, Eigen::MatrixXd& h) const {
        const double center = val(flat);
        for (int i = 0; i < n; ++i) {
            h(i, i) = (val(flat + stride[i]) - 2.0 * center + val(flat - stride[i])) * inv_h2[i];
            for (int j = i + 1; j < n; ++j) {
                const double cross = val(flat + stride[i] + stride[j]) -
                                     val(flat + stride[i] - stride[j]) -
                                     val(flat - stride[i] + stride[j]) +
                                     val(flat - stride[i] - stride[j]);
                h(i, j) = cross * inv_4hh[static_cast<std::size_t>(i) * n + j];
                h(j, i) = h(i, j);
            }
        }
    }
};

/// Principal-minor route to sigma_1, sigma_2 of a symmetric matrix:
/// sigma_1 = trace, sigma_2 = (trace^2 - ||.||_F^2) / 2. Avoids an
/// eigendecomposition where only the minors are needed and keeps the exact
/// power-of-two scaling of the residual.
struct Minors {
    double s1 = 0.0;
    double s2 = 0.0;
};

Minors hessian_minors(const Eigen::MatrixXd& h) {
    const int n = static_cast<int>(h.rows());
    double trace = 0.0;
    double fro = 0.0;
    for (int i = 0; i < n; ++i) {
        trace += h(i, i);
        for (int j = 0; j < n; ++j) fro += h(i, j) * h(i, j);
    }
    return {trace, 0.5 * (trace * trace - fro)};
}

std::string format_node(const Grid& g, std::int64_t flat) {
    const std::vector<int> idx = g.multi_index(flat);
    std::ostringstream os;
    os << "(";
    for (std::size_t d = 0; d < idx.size(); ++d) os << (d ? "," : "") << idx[d];
    os << ")";
    return os.str();
}

[[noreturn]] void throw_non_admissible(const GridFunction& u, std::int64_t flat,
                                       const Minors& worst) {
    const SymMatrix h = discrete_hessian(u, flat);
    const spectral::EigenDecomposition ed = spectral::eigen(h);
    std::ostringstream os;
    os << "residual: discrete Hessian outside Gamma_2 at node " << format_node(u.grid, flat)
       << ": sigma_1=" << worst.s1 << ", sigma_2=" << worst.s2 << ", spectrum=[";
    for (int i = 0; i < ed.eigenvalues.dim(); ++i)
        os << (i ? "," : "") << ed.eigenvalues[i];
    os << "]";
    throw std::domain_error(os.str());
}

/// min over interior nodes of min(sigma_1, sigma_2): > 0 iff every node is
/// strictly admissible, and the distance proxy reported by SolveReport.
double admissibility_margin(const GridFunction& u, const InteriorMap& map) {
    const StencilContext ctx(u.grid);
    Eigen::MatrixXd h(ctx.n, ctx.n);
    const auto val = [&u](std::int64_t f) { return u.values(f); };
    double margin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < map.count(); ++a) {
        ctx.hessian(val, map.grid_flat(a), h);
        const Minors m = hessian_minors(h);
        margin = std::min(margin, std::min(m.s1, m.s2));
    }
    return margin;
}

}  // namespace

SymMatrix discrete_hessian(const GridFunction& u, const std::vector<int>& node) {
    const Grid& g = u.grid;
    if (static_cast<int>(node.size()) != g.dim()) {
        throw std::domain_error("discrete_hessian: index dimension mismatch");
    }
    if (!g.is_interior(node)) {
        throw std::domain_error("discrete_hessian: node " +
                                format_node(g, g.flat_index(node)) +
                                " is in the boundary layer; the stencil needs all neighbors");
    }
    const StencilContext ctx(g);
    Eigen::MatrixXd h(ctx.n, ctx.n);
    ctx.hessian([&u](std::int64_t f) { return u.values(f); }, g.flat_index(node), h);
    return SymMatrix(h);
}

SymMatrix discrete_hessian(const GridFunction& u, std::int64_t flat) {
    return discrete_hessian(u, u.grid.multi_index(flat));
}

Eigen::VectorXd residual(const GridFunction& u, const ProblemSpec& spec) {
    if (!(u.grid == spec.grid)) {
        throw std::domain_error("residual: grid function does not live on the problem grid");
    }
    const Grid& g = u.grid;
    const InteriorMap map(g);
    const StencilContext ctx(g);
    Eigen::MatrixXd h(ctx.n, ctx.n);
    const auto val = [&u](std::int64_t f) { return u.values(f); };

    Eigen::VectorXd out(map.count());
    std::int64_t worst_flat = -1;
    Minors worst{0.0, 0.0};
    double worst_margin = 0.0;
    for (int a = 0; a < map.count(); ++a) {
        const std::int64_t flat = map.grid_flat(a);
        ctx.hessian(val, flat, h);
        const Minors m = hessian_minors(h);
        const double margin = std::min(m.s1, m.s2);
        if (!(margin > 0.0)) {
            if (worst_flat < 0 || margin < worst_margin) {
                worst_flat = flat;
                worst = m;
                worst_margin = margin;
            }
            continue;
        }
        const double value = spec.op == OperatorKind::quotient21 ? m.s2 / m.s1 : m.s2;
        out(a) = value - spec.rhs;
    }
    if (worst_flat >= 0) throw_non_admissible(u, worst_flat, worst);
    return out;
}

Linearization::Linearization(const GridFunction& u, const ProblemSpec& spec)
    : grid_(u.grid), map_(u.grid) {
    if (!(u.grid == spec.grid)) {
        throw std::domain_error("linearize: grid function does not live on the problem grid");
    }
    const StencilContext ctx(grid_);
    Eigen::MatrixXd h(ctx.n, ctx.n);
    const auto val = [&u](std::int64_t f) { return u.values(f); };

    coeff_.reserve(static_cast<std::size_t>(map_.count()));
    std::int64_t worst_flat = -1;
    Minors worst{0.0, 0.0};
    double worst_margin = 0.0;
    for (int a = 0; a < map_.count(); ++a) {
        const std::int64_t flat = map_.grid_flat(a);
        ctx.hessian(val, flat, h);
        const Minors m = hessian_minors(h);
        const double margin = std::min(m.s1, m.s2);
        if (!(margin > 0.0)) {
            if (worst_flat < 0 || margin < worst_margin) {
                worst_flat = flat;
                worst = m;
                worst_margin = margin;
            }
            coeff_.emplace_back();
            continue;
        }
        const spectral::EigenDecomposition ed = spectral::eigen(SymMatrix(h));
        Eigen::VectorXd f(ctx.n);
        if (spec.op == OperatorKind::quotient21) {
            f = symfun::quotient_21_gradient(ed.eigenvalues);
        } else {
            const double s1 = ed.eigenvalues.values().sum();
            for (int i = 0; i < ctx.n; ++i) f(i) = s1 - ed.eigenvalues[i];
        }
        coeff_.push_back(ed.eigenvectors * f.asDiagonal() * ed.eigenvectors.transpose());
    }
    if (worst_flat >= 0) throw_non_admissible(u, worst_flat, worst);
}

Eigen::VectorXd Linearization::apply(const Eigen::VectorXd& w_interior) const {
    if (w_interior.size() != map_.count()) {
        throw std::domain_error("linearize: interior vector has wrong length");
    }
    const StencilContext ctx(grid_);
    Eigen::MatrixXd h(ctx.n, ctx.n);
    const auto val = [this, &w_interior](std::int64_t f) {
        const int ord = map_.ordinal(f);
        return ord >= 0 ? w_interior(ord) : 0.0;
    };
    Eigen::VectorXd out(map_.count());
    for (int a = 0; a < map_.count(); ++a) {
        ctx.hessian(val, map_.grid_flat(a), h);
        const Eigen::MatrixXd& f = coeff_[static_cast<std::size_t>(a)];
        double sum = 0.0;
        for (int i = 0; i < ctx.n; ++i) {
            sum += f(i, i) * h(i, i);
            for (int j = i + 1; j < ctx.n; ++j) sum += 2.0 * f(i, j) * h(i, j);
        }
        out(a) = sum;
    }
    return out;
}

Eigen::VectorXd Linearization::apply_full(const GridFunction& w) const {
    if (!(w.grid == grid_)) {
        throw std::domain_error("linearize: perturbation does not live on the problem grid");
    }
    const StencilContext ctx(grid_);
    Eigen::MatrixXd h(ctx.n, ctx.n);
    const auto val = [&w](std::int64_t f) { return w.values(f); };
    Eigen::VectorXd out(map_.count());
    for (int a = 0; a < map_.count(); ++a) {
        ctx.hessian(val, map_.grid_flat(a), h);
        const Eigen::MatrixXd& f = coeff_[static_cast<std::size_t>(a)];
        double sum = 0.0;
        for (int i = 0; i < ctx.n; ++i) {
            sum += f(i, i) * h(i, i);
            for (int j = i + 1; j < ctx.n; ++j) sum += 2.0 * f(i, j) * h(i, j);
        }
        out(a) = sum;
    }
    return out;
}

Eigen::SparseMatrix<double> Linearization::assemble() const {
    const StencilContext ctx(grid_);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(map_.count()) *
                     (1 + 2 * ctx.n + 2 * ctx.n * (ctx.n - 1)));
    for (int a = 0; a < map_.count(); ++a) {
        const std::int64_t flat = map_.grid_flat(a);
        const Eigen::MatrixXd& f = coeff_[static_cast<std::size_t>(a)];
        double diag = 0.0;
        for (int i = 0; i < ctx.n; ++i) {
            diag += f(i, i) * (-2.0 * ctx.inv_h2[i]);
            for (const int sgn : {+1, -1}) {
                const int ord = map_.ordinal(flat + sgn * ctx.stride[i]);
                if (ord >= 0) triplets.emplace_back(a, ord, f(i, i) * ctx.inv_h2[i]);
            }
            for (int j = i + 1; j < ctx.n; ++j) {
                // dPhi/du at the four cross-stencil corners: the symmetric
                // pair F^ij, F^ji contributes 2 F^ij / (4 h_i h_j).
                const double w = 2.0 * f(i, j) * ctx.inv_4hh[static_cast<std::size_t>(i) * ctx.n + j];
                const std::int64_t si = ctx.stride[i];
                const std::int64_t sj = ctx.stride[j];
                for (const auto& [offset, sign] :
                     {std::pair{si + sj, +1.0}, std::pair{si - sj, -1.0},
                      std::pair{-si + sj, -1.0}, std::pair{-si - sj, +1.0}}) {
                    const int ord = map_.ordinal(flat + offset);
                    if (ord >= 0) triplets.emplace_back(a, ord, sign * w);
                }
            }
        }
        triplets.emplace_back(a, a, diag);
    }
    Eigen::SparseMatrix<double> j(map_.count(), map_.count());
    j.setFromTriplets(triplets.begin(), triplets.end());
    return j;
}

namespace {

/// One Newton run at fixed boundary data (already written into u). Returns
/// the residual history for this stage and updates the shared report.
void newton_stage(GridFunction& u, const ProblemSpec& spec, const InteriorMap& map,
                  double tolerance, SolveReport& report, bool final_stage) {
    Eigen::VectorXd r;
    try {
        r = residual(u, spec);
    } catch (const std::domain_error& e) {
        report.admissibility_margin = admissibility_margin(u, map);
        throw SolveError(SolveFailure::non_admissible_start,
                         std::string("stage start is not admissible: ") + e.what(), report);
    }
    double res = r.lpNorm<Eigen::Infinity>();
    report.residual_history.push_back(res);

    int stage_iterations = 0;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    while (res > tolerance) {
        if (stage_iterations >= kMaxIterations) {
            report.final_residual = res;
            throw SolveError(SolveFailure::iteration_cap,
                             "Newton did not reach tolerance " + std::to_string(tolerance) +
                                 " within " + std::to_string(kMaxIterations) +
                                 " iterations (residual " + std::to_string(res) + ")",
                             report);
        }
        const Linearization lin(u, spec);
        const Eigen::SparseMatrix<double> jac = lin.assemble();
        lu.compute(jac);
        Eigen::VectorXd delta;
        if (lu.info() == Eigen::Success) delta = lu.solve(-r);
        if (lu.info() != Eigen::Success || !delta.allFinite()) {
            report.final_residual = res;
            throw SolveError(SolveFailure::linear_solve_failure,
                             "sparse LU factorization or solve failed on the Newton system",
                             report);
        }

        double alpha = 1.0;
        int halvings = 0;
        GridFunction candidate = u;
        while (true) {
            for (int a = 0; a < map.count(); ++a) {
                candidate.values(map.grid_flat(a)) = u.values(map.grid_flat(a)) + alpha * delta(a);
            }
            if (admissibility_margin(candidate, map) >= kLineSearchMargin) {
                const Eigen::VectorXd r_new = residual(candidate, spec);
                const double res_new = r_new.lpNorm<Eigen::Infinity>();
                if (res_new <= kDecreaseFactor * res) {
                    u = candidate;
                    r = r_new;
                    res = res_new;
                    break;
                }
            }
            if (++halvings > kMaxHalvings) {
                report.final_residual = res;
                throw SolveError(SolveFailure::stagnation,
                                 "line search hit the damping floor (" +
                                     std::to_string(kMaxHalvings) +
                                     " halvings) without admissible decrease at residual " +
                                     std::to_string(res),
                                 report);
            }
            alpha *= 0.5;
        }
        report.damping_history.push_back(halvings);
        report.residual_history.push_back(res);
        ++report.iterations;
        ++stage_iterations;
    }

    // One undamped polishing step after convergence: quadratic convergence
    // lands fixtures at rounding level, which downstream Hessian-spread
    // checks need. Kept only if it is admissible and strictly reduces the
    // residual; any failure simply keeps the converged iterate.
    if (final_stage && res > 0.0) {
        try {
            const Linearization lin(u, spec);
            const Eigen::SparseMatrix<double> jac = lin.assemble();
            lu.compute(jac);
            if (lu.info() == Eigen::Success) {
                const Eigen::VectorXd delta = lu.solve(-r);
                if (delta.allFinite()) {
                    GridFunction candidate = u;
                    for (int a = 0; a < map.count(); ++a) {
                        candidate.values(map.grid_flat(a)) =
                            u.values(map.grid_flat(a)) + delta(a);
                    }
                    if (admissibility_margin(candidate, map) >= kLineSearchMargin) {
                        const Eigen::VectorXd r_new = residual(candidate, spec);
                        const double res_new = r_new.lpNorm<Eigen::Infinity>();
                        if (res_new < res) {
                            u = candidate;
                            res = res_new;
                            report.damping_history.push_back(0);
                            report.residual_history.push_back(res);
                            ++report.iterations;
                            ++stage_iterations;
                        }
                    }
                }
            }
        } catch (const std::domain_error&) {
            // polishing is best-effort; the converged iterate stands
        }
    }

    report.stage_iterations.push_back(stage_iterations);
    report.final_residual = res;
}

}  // namespace

std::pair<GridFunction, SolveReport> newton_solve(const ProblemSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid& g = spec.grid;
    const int n = g.dim();
    const InteriorMap map(g);

    // Admissible quadratic start a|x|^2/2 whose operator value is rhs:
    // quotient21(aI) = a(n-1)/2, sigma2(aI) = a^2 n(n-1)/2.
    const double a = spec.op == OperatorKind::quotient21
                         ? 2.0 * spec.rhs / (n - 1)
                         : std::sqrt(2.0 * spec.rhs / (static_cast<double>(n) * (n - 1)));
    GridFunction u = GridFunction::zero(g);
    for (std::int64_t flat = 0; flat < g.node_count(); ++flat) {
        u.values(flat) = 0.5 * a * g.coords(g.multi_index(flat)).squaredNorm();
    }
    const Eigen::VectorXd start_boundary = u.values;

    // Writing a boundary increment onto the trace alone would kick the
    // discrete Hessian at boundary-adjacent nodes by increment/h^2 and throw
    // the stage start out of the admissible cone, with the kick growing
    // under refinement. Each stage therefore starts from the previous
    // iterate plus the discrete harmonic lift of its boundary increment,
    // whose second differences stay of the order of the increment itself.
    // The lift matrix depends only on the grid, so it is factorized once.
    const StencilContext ctx(g);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> lift_solver;
    {
        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(static_cast<std::size_t>(map.count()) * (1 + 2 * n));
        for (int a = 0; a < map.count(); ++a) {
            const std::int64_t flat = map.grid_flat(a);
            double diag = 0.0;
            for (int i = 0; i < n; ++i) {
                diag += 2.0 * ctx.inv_h2[i];
                for (const int sgn : {+1, -1}) {
                    const int ord = map.ordinal(flat + sgn * ctx.stride[i]);
                    if (ord >= 0) triplets.emplace_back(a, ord, -ctx.inv_h2[i]);
                }
            }
            triplets.emplace_back(a, a, diag);
        }
        Eigen::SparseMatrix<double> laplace(map.count(), map.count());
        laplace.setFromTriplets(triplets.begin(), triplets.end());
        lift_solver.compute(laplace);
    }

    SolveReport report;
    const double tolerance = 1e-10 * (1.0 + spec.rhs);
    const int steps = spec.continuation_steps;
    const double nominal_dt = 1.0 / steps;
    // A stage whose start leaves the cone or whose line search stalls is
    // retried with half the boundary increment, from the last converged
    // iterate; six halvings below the nominal step mean the data are
    // genuinely out of reach and the last error is rethrown.
    const double dt_min = nominal_dt / 64.0;

    double t_done = 0.0;
    double dt = nominal_dt;
    while (t_done < 1.0) {
        const double t = std::min(1.0, t_done + dt);

        GridFunction candidate = u;
        Eigen::VectorXd lift_rhs = Eigen::VectorXd::Zero(map.count());
        for (int a = 0; a < map.count(); ++a) {
            const std::int64_t flat = map.grid_flat(a);
            double load = 0.0;
            for (int i = 0; i < n; ++i) {
                for (const int sgn : {+1, -1}) {
                    const std::int64_t nb = flat + sgn * ctx.stride[i];
                    if (map.ordinal(nb) >= 0) continue;
                    const double target =
                        (1.0 - t) * start_boundary(nb) + t * spec.boundary(nb);
                    load += (target - candidate.values(nb)) * ctx.inv_h2[i];
                }
            }
            lift_rhs(a) = load;
        }
        const Eigen::VectorXd lift = lift_solver.solve(lift_rhs);
        if (lift_solver.info() == Eigen::Success && lift.allFinite()) {
            for (int a = 0; a < map.count(); ++a) {
                candidate.values(map.grid_flat(a)) += lift(a);
            }
        }
        for (std::int64_t flat = 0; flat < g.node_count(); ++flat) {
            if (map.ordinal(flat) >= 0) continue;
            candidate.values(flat) = (1.0 - t) * start_boundary(flat) + t * spec.boundary(flat);
        }

        const SolveReport snapshot = report;
        try {
            newton_stage(candidate, spec, map, tolerance, report, /*final_stage=*/t >= 1.0);
            u = std::move(candidate);
            t_done = t;
            dt = nominal_dt;
        } catch (const SolveError& e) {
            const bool step_too_large = e.kind() == SolveFailure::non_admissible_start ||
                                        e.kind() == SolveFailure::stagnation;
            if (!step_too_large || 0.5 * dt < dt_min) throw;
            report = snapshot;  // discard the failed attempt's iterates
            dt *= 0.5;
        }
    }

    report.admissibility_margin = admissibility_margin(u, map);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(u), std::move(report)};
}

}  // namespace hql::pde
