#include "hql/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hql::grid {

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::string fmt17(double v) { return format_g17(v); }

std::int64_t ipow(int base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace

Grid::Grid(Eigen::VectorXd lo, Eigen::VectorXd hi, int nodes_per_axis)
    : lo_(std::move(lo)), m_(nodes_per_axis) {
    const int n = static_cast<int>(lo_.size());
    if (n < 1 || hi.size() != n) {
        throw std::domain_error("Grid: box bounds must be nonempty and agree in dimension");
    }
    if (m_ < 2) {
        throw std::domain_error("Grid: need at least 2 nodes per axis");
    }
    h_.resize(n);
    for (int d = 0; d < n; ++d) {
        const double width = hi(d) - lo_(d);
        if (!(width > 0.0) || !std::isfinite(width)) {
            throw std::domain_error("Grid: box must have positive finite width on every axis");
        }
        h_(d) = width / (m_ - 1);
    }
    node_count_ = ipow(m_, n);
    if (node_count_ > (std::int64_t{1} << 31)) {
        throw std::domain_error("Grid: node count too large");
    }
}

Grid Grid::symmetric(int dim, double extent, int nodes_per_axis) {
    if (dim < 2) {
        throw std::domain_error("Grid::symmetric: dimension must be >= 2");
    }
    if (nodes_per_axis < 5 || nodes_per_axis % 2 == 0) {
        throw std::domain_error("Grid::symmetric: nodes per axis must be odd and >= 5");
    }
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw std::domain_error("Grid::symmetric: extent must be positive and finite");
    }
    const int c = (nodes_per_axis - 1) / 2;
    const double h = 2.0 * extent / (nodes_per_axis - 1);
    // lo = -(c*h) makes lo + c*h vanish exactly, so the origin is a node.
    const double lo = -(c * h);
    Grid g(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, c * h),
           nodes_per_axis);
    g.h_.setConstant(h);  // bypass the width/(m-1) rounding of the general ctor
    g.extent_ = extent;
    g.symmetric_ = true;
    return g;
}

std::int64_t Grid::interior_count() const {
    return ipow(m_ - 2, dim());
}

bool Grid::is_solver_grid() const { return symmetric_ && m_ >= 5 && m_ % 2 == 1; }

double Grid::extent() const {
    if (!symmetric_) {
        throw std::domain_error("Grid::extent: not a symmetric solver grid");
    }
    return extent_;
}

Eigen::VectorXd Grid::coords(const std::vector<int>& idx) const {
    const int n = dim();
    Eigen::VectorXd x(n);
    for (int d = 0; d < n; ++d) x(d) = coord(d, idx[d]);
    return x;
}

std::int64_t Grid::flat_index(const std::vector<int>& idx) const {
    std::int64_t f = 0;
    for (int d = 0; d < dim(); ++d) f = f * m_ + idx[d];
    return f;
}

std::vector<int> Grid::multi_index(std::int64_t flat) const {
    const int n = dim();
    std::vector<int> idx(n);
    for (int d = n - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % m_);
        flat /= m_;
    }
    return idx;
}

bool Grid::is_interior(const std::vector<int>& idx) const {
    for (int d = 0; d < dim(); ++d) {
        if (idx[d] <= 0 || idx[d] >= m_ - 1) return false;
    }
    return true;
}

std::vector<int> Grid::center_index() const {
    if (!symmetric_) {
        throw std::domain_error("Grid::center_index: not a symmetric solver grid");
    }
    return std::vector<int>(dim(), (m_ - 1) / 2);
}

bool Grid::operator==(const Grid& other) const {
    return m_ == other.m_ && lo_ == other.lo_ && h_ == other.h_;
}

GridFunction::GridFunction(Grid g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.node_count()) {
        throw std::domain_error("GridFunction: value count does not match node count");
    }
    if (!values.allFinite()) {
        throw std::domain_error("GridFunction: values must be finite");
    }
}

GridFunction GridFunction::zero(const Grid& g) {
    return GridFunction(g, Eigen::VectorXd::Zero(g.node_count()));
}

InteriorMap::InteriorMap(const Grid& g) {
    const std::int64_t total = g.node_count();
    ordinal_.assign(total, -1);
    grid_flat_.reserve(g.interior_count());
    for (std::int64_t f = 0; f < total; ++f) {
        if (g.is_interior(g.multi_index(f))) {
            ordinal_[f] = static_cast<int>(grid_flat_.size());
            grid_flat_.push_back(f);
        }
    }
}

std::string grid_function_to_text(const GridFunction& u) {
    if (!u.grid.is_solver_grid()) {
        throw std::domain_error("grid serialization: only symmetric solver grids are supported");
    }
    std::ostringstream os;
    os << "hql-grid 1\n";
    os << u.grid.dim() << " " << u.grid.nodes_per_axis() << " " << fmt17(u.grid.extent()) << "\n";
    for (std::int64_t i = 0; i < u.values.size(); ++i) {
        os << fmt17(u.values(i)) << "\n";
    }
    return os.str();
}

GridFunction grid_function_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string magic, version;
    is >> magic >> version;
    if (magic != "hql-grid" || version != "1") {
        throw std::domain_error("grid deserialization: bad header");
    }
    int n = 0, m = 0;
    double extent = 0.0;
    is >> n >> m >> extent;
    if (!is) {
        throw std::domain_error("grid deserialization: bad dimension line");
    }
    Grid g = Grid::symmetric(n, extent, m);
    Eigen::VectorXd v(g.node_count());
    for (std::int64_t i = 0; i < v.size(); ++i) {
        if (!(is >> v(i))) {
            throw std::domain_error("grid deserialization: truncated value table");
        }
    }
    return GridFunction(std::move(g), std::move(v));
}

void save_grid_function(const GridFunction& u, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("save_grid_function: cannot open " + path.string());
    }
    out << grid_function_to_text(u);
}

GridFunction load_grid_function(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_grid_function: cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return grid_function_from_text(ss.str());
}

std::string grid_function_to_csv(const GridFunction& u) {
    std::ostringstream os;
    const int n = u.grid.dim();
    for (int d = 0; d < n; ++d) os << "x" << (d + 1) << ",";
    os << "value\n";
    for (std::int64_t f = 0; f < u.values.size(); ++f) {
        const auto idx = u.grid.multi_index(f);
        for (int d = 0; d < n; ++d) os << fmt17(u.grid.coord(d, idx[d])) << ",";
        os << fmt17(u.values(f)) << "\n";
    }
    return os.str();
}

} // namespace hql::grid
