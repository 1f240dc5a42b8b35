#include "hql/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "hql/spectral.hpp"
#include "hql/symfun.hpp"

namespace hql::analysis {

using spectral::SymMatrix;

double c_of_n(int n) {
    if (n < 2) {
        throw std::domain_error("c_of_n: requires n >= 2, got " + std::to_string(n));
    }
    const double nd = n;
    return (std::sqrt(3.0 * nd * nd + 1.0) - nd + 1.0) / (2.0 * nd);
}

double interior_condition_margin(const GridFunction& u) {
    const Grid& g = u.grid;
    const int n = g.dim();
    const double c = c_of_n(n);
    const double shift = 1.0 / (n - 1);
    const double laplace_ref = static_cast<double>(n) / (n - 1);
    const grid::InteriorMap map(g);
    if (map.count() == 0) {
        throw std::domain_error("interior_condition_margin: grid has no interior nodes");
    }
    double margin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < map.count(); ++a) {
        const SymMatrix h = pde::discrete_hessian(u, map.grid_flat(a));
        const spectral::EigenDecomposition ed = spectral::eigen(h);
        const double node_margin =
            ed.eigenvalues[0] - shift + c * (h.matrix().trace() - laplace_ref);
        margin = std::min(margin, node_margin);
    }
    return margin;
}

RigidityReport fit_quadratic(const GridFunction& u) {
    const Grid& g = u.grid;
    const int n = g.dim();
    const int n_quad = n * (n + 1) / 2;
    const int n_coeff = n_quad + n + 1;
    if (g.node_count() < n_coeff) {
        throw std::domain_error("fit_quadratic: grid has fewer nodes than coefficients");
    }

    // Columns: x_i^2/2 (A_ii), x_i x_j for i<j (A_ij), x_i (b_i), 1 (c).
    Eigen::MatrixXd design(g.node_count(), n_coeff);
    for (std::int64_t f = 0; f < g.node_count(); ++f) {
        const Eigen::VectorXd x = g.coords(g.multi_index(f));
        int col = 0;
        for (int i = 0; i < n; ++i) design(f, col++) = 0.5 * x(i) * x(i);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) design(f, col++) = x(i) * x(j);
        for (int i = 0; i < n; ++i) design(f, col++) = x(i);
        design(f, col) = 1.0;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < n_coeff) {
        throw std::domain_error("fit_quadratic: degenerate node set (design matrix rank " +
                                std::to_string(qr.rank()) + " < " + std::to_string(n_coeff) +
                                ")");
    }
    const Eigen::VectorXd coeff = qr.solve(u.values);

    Eigen::MatrixXd a(n, n);
    int col = 0;
    for (int i = 0; i < n; ++i) a(i, i) = coeff(col++);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = coeff(col);
            a(j, i) = coeff(col);
            ++col;
        }
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = coeff(col++);
    const double c = coeff(col);

    RigidityReport report{transform::QuadraticForm(SymMatrix(a), b, c), 0.0, 0.0};
    const Eigen::VectorXd fitted = design * coeff;
    report.fit_residual = (u.values - fitted).lpNorm<Eigen::Infinity>();

    const grid::InteriorMap map(g);
    for (int i = 0; i < map.count(); ++i) {
        const SymMatrix h = pde::discrete_hessian(u, map.grid_flat(i));
        report.hessian_spread =
            std::max(report.hessian_spread,
                     (h.matrix() - report.fitted.A.matrix()).cwiseAbs().maxCoeff());
    }
    return report;
}

Eigen::VectorXd BoundaryFamily::sample(const Grid& g) const {
    const int n = g.dim();
    Eigen::VectorXd out(g.node_count());
    switch (kind) {
        case BoundaryKind::quadratic: {
            if (!form) {
                throw std::domain_error("BoundaryFamily '" + id +
                                        "': quadratic kind needs a form");
            }
            if (form->dim() != n) {
                throw std::domain_error("BoundaryFamily '" + id + "': form dimension " +
                                        std::to_string(form->dim()) + " vs grid dimension " +
                                        std::to_string(n));
            }
            for (std::int64_t f = 0; f < g.node_count(); ++f) {
                out(f) = (*form)(g.coords(g.multi_index(f)));
            }
            return out;
        }
        case BoundaryKind::cosine:
            for (std::int64_t f = 0; f < g.node_count(); ++f) {
                const Eigen::VectorXd x = g.coords(g.multi_index(f));
                out(f) = 0.5 * base * x.squaredNorm() + eps * std::cos(x.sum());
            }
            return out;
        case BoundaryKind::quartic:
            for (std::int64_t f = 0; f < g.node_count(); ++f) {
                const Eigen::VectorXd x = g.coords(g.multi_index(f));
                out(f) = 0.5 * base * x.squaredNorm() +
                         eps * x.array().square().square().sum();
            }
            return out;
    }
    throw std::domain_error("BoundaryFamily '" + id + "': unknown kind");
}

double lipschitz_estimate(const GridFunction& u) {
    const Grid& g = u.grid;
    const int n = g.dim();
    std::vector<std::int64_t> stride(n);
    stride[n - 1] = 1;
    for (int d = n - 2; d >= 0; --d) stride[d] = stride[d + 1] * g.nodes_per_axis();

    double max_slope = 0.0;
    for (std::int64_t f = 0; f < g.node_count(); ++f) {
        const std::vector<int> idx = g.multi_index(f);
        for (int d = 0; d < n; ++d) {
            if (idx[d] + 1 >= g.nodes_per_axis()) continue;
            max_slope = std::max(
                max_slope, std::abs(u.values(f + stride[d]) - u.values(f)) / g.spacing(d));
        }
    }
    return max_slope + u.values.cwiseAbs().maxCoeff();
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

InteriorRun run_one(const InteriorConfig& config, const BoundaryFamily& family, int m) {
    InteriorRun run;
    run.n = config.n;
    run.m = m;
    run.extent = config.extent;
    run.boundary_id = family.id;
    run.run_id = family.id + "_m" + std::to_string(m);
    run.lip_norm = run.hess0_max = run.hess0_spec = kNan;
    run.k_semiconvex = run.condition_margin = run.final_residual = kNan;
    run.center_value = kNan;

    try {
        const Grid g = Grid::symmetric(config.n, config.extent, m);
        const pde::ProblemSpec spec(g, config.op, config.rhs, family.sample(g),
                                    config.continuation_steps);
        auto [u, report] = pde::newton_solve(spec);
        run.ok = true;
        run.newton_iters = report.iterations;
        run.final_residual = report.final_residual;
        run.lip_norm = lipschitz_estimate(u);
        run.center_value = u.values(g.flat_index(g.center_index()));

        const SymMatrix h0 = pde::discrete_hessian(u, g.center_index());
        run.hess0_max = h0.matrix().cwiseAbs().maxCoeff();
        const spectral::EigenDecomposition ed0 = spectral::eigen(h0);
        run.hess0_spec = std::max(std::abs(ed0.eigenvalues[0]),
                                  std::abs(ed0.eigenvalues[ed0.eigenvalues.dim() - 1]));

        const grid::InteriorMap map(g);
        const double c = c_of_n(config.n);
        const double shift = 1.0 / (config.n - 1);
        const double laplace_ref = static_cast<double>(config.n) / (config.n - 1);
        double k = 0.0;
        double margin = std::numeric_limits<double>::infinity();
        for (int a = 0; a < map.count(); ++a) {
            const SymMatrix h = pde::discrete_hessian(u, map.grid_flat(a));
            const spectral::EigenDecomposition ed = spectral::eigen(h);
            k = std::max(k, std::max(0.0, -ed.eigenvalues[0]));
            margin = std::min(margin, ed.eigenvalues[0] - shift +
                                          c * (h.matrix().trace() - laplace_ref));
        }
        run.k_semiconvex = k;
        run.condition_margin = margin;
        run.stress_flag = run.hess0_max > config.stress_multiple * run.lip_norm;
    } catch (const pde::SolveError& e) {
        run.ok = false;
        run.failure = to_string(e.kind()) + ": " + e.what();
        run.newton_iters = e.report().iterations;
    } catch (const std::domain_error& e) {
        run.ok = false;
        run.failure = std::string("precondition: ") + e.what();
    }
    return run;
}

}  // namespace

InteriorReport interior_estimate_experiment(const InteriorConfig& config) {
    if (config.families.empty()) {
        throw std::domain_error("interior_estimate_experiment: no boundary families configured");
    }
    if (config.resolutions.empty()) {
        throw std::domain_error("interior_estimate_experiment: no resolutions configured");
    }
    std::vector<std::pair<const BoundaryFamily*, int>> tasks;
    for (const BoundaryFamily& family : config.families) {
        for (int m : config.resolutions) tasks.emplace_back(&family, m);
    }

    InteriorReport report;
    report.runs.resize(tasks.size());
    const int threads =
        std::clamp(config.threads, 1, static_cast<int>(tasks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            report.runs[i] = run_one(config, *tasks[i].first, tasks[i].second);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
                report.runs[i] = run_one(config, *tasks[i].first, tasks[i].second);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return report;
}

std::string InteriorReport::to_csv() const {
    std::ostringstream os;
    os << "run_id,n,m,L,boundary_id,lip_norm,hess0_max,hess0_spec,K_semiconvex,"
          "thm31_margin,newton_iters,final_residual\n";
    for (const InteriorRun& r : runs) {
        os << r.run_id << "," << r.n << "," << r.m << "," << grid::format_g17(r.extent) << ","
           << r.boundary_id << "," << grid::format_g17(r.lip_norm) << ","
           << grid::format_g17(r.hess0_max) << "," << grid::format_g17(r.hess0_spec) << ","
           << grid::format_g17(r.k_semiconvex) << "," << grid::format_g17(r.condition_margin)
           << "," << r.newton_iters << "," << grid::format_g17(r.final_residual) << "\n";
    }
    return os.str();
}

}  // namespace hql::analysis
