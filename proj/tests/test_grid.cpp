#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hql/grid.hpp"

using hql::grid::format_g17;
using hql::grid::Grid;
using hql::grid::grid_function_from_text;
using hql::grid::grid_function_to_csv;
using hql::grid::grid_function_to_text;
using hql::grid::GridFunction;
using hql::grid::InteriorMap;
using hql::grid::load_grid_function;
using hql::grid::save_grid_function;

TEST_CASE("symmetric grid: origin is exactly a node, spacing is shared") {
    for (int dim = 2; dim <= 3; ++dim) {
        for (int m : {5, 9, 17, 33}) {
            for (double L : {1.0, 0.7, 3.1}) {
                const Grid g = Grid::symmetric(dim, L, m);
                CHECK(g.dim() == dim);
                CHECK(g.nodes_per_axis() == m);
                CHECK(g.is_solver_grid());
                CHECK(g.extent() == L);

                const auto c = g.center_index();
                for (int d = 0; d < dim; ++d) {
                    CHECK(c[d] == (m - 1) / 2);
                    CHECK(g.coord(d, c[d]) == 0.0);  // exact, not approximate
                    CHECK(g.spacing(d) == 2.0 * L / (m - 1));
                    CHECK(g.lo(d) == -g.hi(d));
                }
            }
        }
    }
}

TEST_CASE("symmetric grid: input validation") {
    CHECK_THROWS_AS(Grid::symmetric(1, 1.0, 5), std::domain_error);
    CHECK_THROWS_AS(Grid::symmetric(2, 1.0, 4), std::domain_error);   // even
    CHECK_THROWS_AS(Grid::symmetric(2, 1.0, 3), std::domain_error);   // too small
    CHECK_THROWS_AS(Grid::symmetric(2, 0.0, 5), std::domain_error);
    CHECK_THROWS_AS(Grid::symmetric(2, -1.0, 5), std::domain_error);
}

TEST_CASE("general box grid: per-axis spacing, no solver-grid claims") {
    Eigen::VectorXd lo(2), hi(2);
    lo << 0.0, 2.0;
    hi << 1.0, 5.0;
    const Grid g(lo, hi, 7);
    CHECK(g.dim() == 2);
    CHECK(g.spacing(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(g.spacing(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_FALSE(g.is_solver_grid());
    CHECK_THROWS_AS(g.extent(), std::domain_error);
    CHECK_THROWS_AS(g.center_index(), std::domain_error);

    CHECK_THROWS_AS(Grid(lo, hi, 1), std::domain_error);
    Eigen::VectorXd bad_hi(2);
    bad_hi << 0.0, 5.0;  // zero width on axis 0
    CHECK_THROWS_AS(Grid(lo, bad_hi, 7), std::domain_error);
}

TEST_CASE("flat/multi index round trip and row-major layout") {
    const Grid g = Grid::symmetric(3, 1.0, 5);
    CHECK(g.node_count() == 125);
    CHECK(g.interior_count() == 27);

    // Row-major, axis 0 slowest: flat = (i0*m + i1)*m + i2.
    CHECK(g.flat_index({0, 0, 0}) == 0);
    CHECK(g.flat_index({0, 0, 1}) == 1);
    CHECK(g.flat_index({0, 1, 0}) == 5);
    CHECK(g.flat_index({1, 0, 0}) == 25);
    CHECK(g.flat_index({4, 4, 4}) == 124);

    for (std::int64_t f = 0; f < g.node_count(); ++f) {
        const auto idx = g.multi_index(f);
        CHECK(g.flat_index(idx) == f);
    }
}

TEST_CASE("is_interior and InteriorMap agree and are mutually inverse") {
    const Grid g = Grid::symmetric(2, 1.0, 7);
    const InteriorMap map(g);
    CHECK(map.count() == 25);

    int seen = 0;
    for (std::int64_t f = 0; f < g.node_count(); ++f) {
        const bool interior = g.is_interior(g.multi_index(f));
        const int ord = map.ordinal(f);
        if (interior) {
            CHECK(ord >= 0);
            CHECK(map.grid_flat(ord) == f);
            ++seen;
        } else {
            CHECK(ord == -1);
        }
    }
    CHECK(seen == map.count());

    // Ordinals walk the interior in ascending flat order.
    for (int a = 0; a + 1 < map.count(); ++a) {
        CHECK(map.grid_flat(a) < map.grid_flat(a + 1));
    }
}

TEST_CASE("GridFunction validates its value vector") {
    const Grid g = Grid::symmetric(2, 1.0, 5);
    CHECK_THROWS_AS(GridFunction(g, Eigen::VectorXd::Zero(24)), std::domain_error);
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(25);
    bad(3) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(GridFunction(g, bad), std::domain_error);

    GridFunction u = GridFunction::zero(g);
    u.at({2, 2}) = 7.5;
    CHECK(u.values(g.flat_index({2, 2})) == 7.5);
}

TEST_CASE("text serialization: header, byte-exact round trip, double fidelity") {
    const Grid g = Grid::symmetric(2, 0.7, 5);
    GridFunction u = GridFunction::zero(g);
    // Values chosen to stress the formatter: non-terminating binary fractions,
    // tiny magnitudes, and exact integers.
    u.values(0) = 1.0 / 3.0;
    u.values(1) = 0.1;
    u.values(2) = -1e-300;
    u.values(3) = 12345678.0;
    u.values(4) = 6.02214076e23;

    const std::string text = grid_function_to_text(u);
    CHECK(text.rfind("hql-grid 1\n", 0) == 0);
    CHECK(text.find("2 5 0.69999999999999996\n") != std::string::npos);

    const GridFunction v = grid_function_from_text(text);
    CHECK(v.grid == u.grid);
    for (std::int64_t i = 0; i < u.values.size(); ++i) CHECK(v.values(i) == u.values(i));

    // Round trip is byte-exact, so re-serialization reproduces the text.
    CHECK(grid_function_to_text(v) == text);
}

TEST_CASE("text deserialization rejects malformed input") {
    CHECK_THROWS_AS(grid_function_from_text("nonsense"), std::domain_error);
    CHECK_THROWS_AS(grid_function_from_text("hql-grid 2\n2 5 1\n"), std::domain_error);
    CHECK_THROWS_AS(grid_function_from_text("hql-grid 1\n2 5 1\n0\n0\n"), std::domain_error);
}

TEST_CASE("file save/load round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hql_grid_test";
    fs::create_directories(dir);
    const fs::path file = dir / "u.txt";

    const Grid g = Grid::symmetric(3, 1.0, 5);
    GridFunction u = GridFunction::zero(g);
    for (std::int64_t f = 0; f < g.node_count(); ++f) {
        u.values(f) = 0.25 * static_cast<double>(f) - 3.0;
    }

    save_grid_function(u, file);
    const GridFunction v = load_grid_function(file);
    CHECK(v.grid == u.grid);
    CHECK((v.values - u.values).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(load_grid_function(dir / "missing.txt"), std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("CSV export: header, row count, coordinates in row-major order") {
    const Grid g = Grid::symmetric(2, 1.0, 5);
    GridFunction u = GridFunction::zero(g);
    u.values(0) = 42.0;

    const std::string csv = grid_function_to_csv(u);
    CHECK(csv.rfind("x1,x2,value\n", 0) == 0);

    std::int64_t lines = 0;
    for (char ch : csv) {
        if (ch == '\n') ++lines;
    }
    CHECK(lines == g.node_count() + 1);
    // First data row is the lo corner.
    CHECK(csv.find("\n-1,-1,42\n") != std::string::npos);
}

TEST_CASE("format_g17 round-trips doubles exactly") {
    for (double x : {0.1, 1.0 / 3.0, -1e-300, 1e300, 2.5, -0.0, 6.02214076e23,
                     0.69999999999999996}) {
        const std::string s = format_g17(x);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == x);
    }
    CHECK(format_g17(2.5) == "2.5");
    CHECK(format_g17(0.1) == "0.10000000000000001");
}
