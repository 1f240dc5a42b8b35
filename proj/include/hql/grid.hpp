#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hql::grid {

/// Uniform tensor grid over a box with the same node count m per axis.
/// Solver grids come from Grid::symmetric(): extents [-L, L] per axis with
/// odd m >= 5, so the origin is exactly a node and the spacing is shared
/// across axes. The general constructor admits arbitrary boxes (used for
/// conjugate functions sampled on a gradient range).
class Grid {
public:
    Grid(Eigen::VectorXd lo, Eigen::VectorXd hi, int nodes_per_axis);

    static Grid symmetric(int dim, double extent, int nodes_per_axis);

    int dim() const { return static_cast<int>(lo_.size()); }
    int nodes_per_axis() const { return m_; }
    std::int64_t node_count() const { return node_count_; }
    std::int64_t interior_count() const;

    double spacing(int axis) const { return h_(axis); }
    double lo(int axis) const { return lo_(axis); }
    double hi(int axis) const { return lo_(axis) + (m_ - 1) * h_(axis); }

    /// True for grids made by symmetric(): equal spacings, box centered at
    /// the origin, odd m >= 5.
    bool is_solver_grid() const;
    /// The extent L the grid was built with (solver grids only).
    double extent() const;

    Eigen::VectorXd coords(const std::vector<int>& idx) const;
    double coord(int axis, int i) const { return lo_(axis) + i * h_(axis); }

    std::int64_t flat_index(const std::vector<int>& idx) const;
    std::vector<int> multi_index(std::int64_t flat) const;
    bool is_interior(const std::vector<int>& idx) const;

    /// Multi index of the origin node (solver grids).
    std::vector<int> center_index() const;

    bool operator==(const Grid& other) const;

private:
    Eigen::VectorXd lo_;
    Eigen::VectorXd h_;
    int m_ = 0;
    std::int64_t node_count_ = 0;
    double extent_ = 0.0;   // set by symmetric()
    bool symmetric_ = false;
};

/// Real values on every node of a grid, row-major (axis 0 slowest).
struct GridFunction {
    Grid grid;
    Eigen::VectorXd values;

    GridFunction(Grid g, Eigen::VectorXd v);
    static GridFunction zero(const Grid& g);

    double at(const std::vector<int>& idx) const { return values(grid.flat_index(idx)); }
    double& at(const std::vector<int>& idx) { return values(grid.flat_index(idx)); }
};

/// Maps between grid flat indices and a dense ordering of interior nodes.
class InteriorMap {
public:
    explicit InteriorMap(const Grid& g);

    int count() const { return static_cast<int>(grid_flat_.size()); }
    std::int64_t grid_flat(int ordinal) const { return grid_flat_[ordinal]; }
    /// -1 for boundary nodes.
    int ordinal(std::int64_t grid_flat) const { return ordinal_[grid_flat]; }

private:
    std::vector<std::int64_t> grid_flat_;
    std::vector<int> ordinal_;
};

/// Text serialization of a solver-grid function. Layout, byte-exact:
///   line 1: "hql-grid 1"
///   line 2: n m L   (dimension, nodes per axis, extent; L printed as %.17g)
///   then one node value per line, %.17g, row-major (axis 0 slowest).
/// Lines end with '\n'.
void save_grid_function(const GridFunction& u, const std::filesystem::path& path);
GridFunction load_grid_function(const std::filesystem::path& path);
std::string grid_function_to_text(const GridFunction& u);
GridFunction grid_function_from_text(const std::string& text);

/// CSV export with header x1,...,xn,value, one row per node in row-major
/// order, fields printed as %.17g. Works for any grid.
std::string grid_function_to_csv(const GridFunction& u);

/// The shared numeric rendering for every persisted artifact (%.17g):
/// round-trips doubles exactly and keeps outputs byte-reproducible.
std::string format_g17(double x);

} // namespace hql::grid
