#include "hql/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hql/pde.hpp"
#include "hql/symfun.hpp"

namespace hql::transform {

QuadraticForm::QuadraticForm(SymMatrix a, Eigen::VectorXd b_in, double c_in)
    : A(std::move(a)), b(std::move(b_in)), c(c_in) {
    if (b.size() != A.dim()) {
        throw std::domain_error("QuadraticForm: b has length " + std::to_string(b.size()) +
                                ", expected " + std::to_string(A.dim()));
    }
    if (!b.allFinite() || !std::isfinite(c)) {
        throw std::domain_error("QuadraticForm: coefficients must be finite");
    }
}

QuadraticForm::QuadraticForm(SymMatrix a)
    : QuadraticForm(a, Eigen::VectorXd::Zero(a.dim()), 0.0) {}

double QuadraticForm::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != A.dim()) {
        throw std::domain_error("QuadraticForm: argument has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(A.dim()));
    }
    return 0.5 * x.dot(A.matrix() * x) + b.dot(x) + c;
}

GridFunction eval_quadratic(const QuadraticForm& q, const Grid& g) {
    if (q.dim() != g.dim()) {
        throw std::domain_error("eval_quadratic: form dimension " + std::to_string(q.dim()) +
                                " does not match grid dimension " + std::to_string(g.dim()));
    }
    Eigen::VectorXd values(g.node_count());
    for (std::int64_t flat = 0; flat < g.node_count(); ++flat) {
        values(flat) = q(g.coords(g.multi_index(flat)));
    }
    return GridFunction(g, std::move(values));
}

GridFunction subtract_reduction_quadratic(const GridFunction& u) {
    const Grid& g = u.grid;
    const double scale = 1.0 / (2.0 * (g.dim() - 1));
    Eigen::VectorXd values(g.node_count());
    for (std::int64_t flat = 0; flat < g.node_count(); ++flat) {
        values(flat) = u.values(flat) - scale * g.coords(g.multi_index(flat)).squaredNorm();
    }
    return GridFunction(g, std::move(values));
}

SymMatrix hessian_shift(const SymMatrix& s, int n) {
    if (n != s.dim()) {
        throw std::domain_error("hessian_shift: n = " + std::to_string(n) +
                                " does not match matrix dimension " + std::to_string(s.dim()));
    }
    Eigen::MatrixXd shifted = s.matrix();
    shifted.diagonal().array() -= 1.0 / (n - 1);
    return SymMatrix(shifted);
}

bool LegendreResult::in_window(const std::vector<int>& idx) const {
    const int m = conjugate.grid.nodes_per_axis();
    for (int i : idx) {
        if (i < usable_margin || i > m - 1 - usable_margin) return false;
    }
    return true;
}

namespace {

std::string format_node(const std::vector<int>& idx) {
    std::ostringstream os;
    os << "(";
    for (std::size_t d = 0; d < idx.size(); ++d) os << (d ? "," : "") << idx[d];
    os << ")";
    return os.str();
}

void check_discrete_convexity(const GridFunction& u) {
    const Grid& g = u.grid;
    std::vector<std::string> offenders;
    for (std::int64_t flat = 0; flat < g.node_count(); ++flat) {
        const std::vector<int> idx = g.multi_index(flat);
        if (!g.is_interior(idx)) continue;
        const SymMatrix hess = pde::discrete_hessian(u, idx);
        const spectral::EigenDecomposition ed = spectral::eigen(hess);
        if (ed.eigenvalues[0] <= 0.0 && offenders.size() < 8) {
            std::ostringstream os;
            os << format_node(idx) << " lambda_min=" << ed.eigenvalues[0];
            offenders.push_back(os.str());
        }
    }
    if (!offenders.empty()) {
        std::ostringstream os;
        os << "discrete_legendre: input is not discretely convex at " << offenders.size()
           << "+ node(s):";
        for (const std::string& o : offenders) os << " " << o;
        throw std::domain_error(os.str());
    }
}

}  // namespace

LegendreResult discrete_legendre(const GridFunction& u, bool check_convexity) {
    const Grid& g = u.grid;
    const int n = g.dim();
    const int m = g.nodes_per_axis();
    if (m < 5) {
        throw std::domain_error("discrete_legendre: need at least 5 nodes per axis");
    }
    if (check_convexity) check_discrete_convexity(u);

    // Bounding box of central-difference gradients over the interior nodes.
    Eigen::VectorXd glo = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    Eigen::VectorXd ghi = -glo;
    for (std::int64_t flat = 0; flat < g.node_count(); ++flat) {
        std::vector<int> idx = g.multi_index(flat);
        if (!g.is_interior(idx)) continue;
        for (int d = 0; d < n; ++d) {
            std::vector<int> plus = idx, minus = idx;
            ++plus[d];
            --minus[d];
            const double grad = (u.at(plus) - u.at(minus)) / (2.0 * g.spacing(d));
            glo(d) = std::min(glo(d), grad);
            ghi(d) = std::max(ghi(d), grad);
        }
    }
    for (int d = 0; d < n; ++d) {
        if (!(ghi(d) > glo(d))) {
            throw std::domain_error(
                "discrete_legendre: degenerate gradient range along axis " + std::to_string(d) +
                " (input not strictly convex)");
        }
    }

    Grid out(glo, ghi, m);
    Eigen::VectorXd values(out.node_count());
    for (std::int64_t oflat = 0; oflat < out.node_count(); ++oflat) {
        const Eigen::VectorXd y = out.coords(out.multi_index(oflat));
        double best = -std::numeric_limits<double>::infinity();
        for (std::int64_t xflat = 0; xflat < g.node_count(); ++xflat) {
            const Eigen::VectorXd x = g.coords(g.multi_index(xflat));
            best = std::max(best, x.dot(y) - u.values(xflat));
        }
        values(oflat) = best;
    }

    LegendreResult result{GridFunction(out, std::move(values)), m / 4};
    return result;
}

}  // namespace hql::transform
