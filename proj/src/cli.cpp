#include "hql/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hql/analysis.hpp"
#include "hql/grid.hpp"
#include "hql/pde.hpp"
#include "hql/rng.hpp"
#include "hql/spectral.hpp"
#include "hql/svg.hpp"
#include "hql/symfun.hpp"
#include "hql/transform.hpp"

namespace hql::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20260814ULL;

/// Config-level mistakes that are not JSON syntax errors (bad schema tag,
/// empty family list, ...). Mapped to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out.good()) {
            throw UsageError("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) {
        throw UsageError("cannot read config file " + path);
    }
    json cfg = json::parse(in);  // json::parse_error maps to the usage code
    if (!cfg.is_object() || cfg.value("schema", "") != "hql-config/1") {
        throw UsageError("config must be an object with \"schema\": \"hql-config/1\"");
    }
    return cfg;
}

int env_threads() {
    const char* raw = std::getenv("HQL_THREADS");
    if (raw == nullptr || *raw == '\0') return 1;
    const int v = std::atoi(raw);
    return std::clamp(v, 1, 64);
}

// ---------------------------------------------------------------------------
// config parsing

grid::Grid parse_grid(const json& j) {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const double extent = j.at("L").get<double>();
    return grid::Grid::symmetric(n, extent, m);
}

pde::OperatorKind parse_operator(const std::string& name) {
    if (name == "quotient21") return pde::OperatorKind::quotient21;
    if (name == "sigma2") return pde::OperatorKind::sigma2;
    throw UsageError("unknown operator \"" + name + "\" (expected quotient21 or sigma2)");
}

transform::QuadraticForm parse_form(const json& j, int n) {
    const json& ja = j.at("A");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    if (ja.is_array() && !ja.empty() && ja.front().is_array()) {
        if (static_cast<int>(ja.size()) != n) {
            throw UsageError("quadratic family: A must be " + std::to_string(n) + "x" +
                             std::to_string(n));
        }
        for (int i = 0; i < n; ++i) {
            const json& row = ja.at(i);
            if (static_cast<int>(row.size()) != n) {
                throw UsageError("quadratic family: A row " + std::to_string(i) +
                                 " has wrong length");
            }
            for (int k = 0; k < n; ++k) a(i, k) = row.at(k).get<double>();
        }
    } else {
        if (static_cast<int>(ja.size()) != n) {
            throw UsageError("quadratic family: diagonal A must have " + std::to_string(n) +
                             " entries");
        }
        for (int i = 0; i < n; ++i) a(i, i) = ja.at(i).get<double>();
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    if (j.contains("b")) {
        const json& jb = j.at("b");
        if (static_cast<int>(jb.size()) != n) {
            throw UsageError("quadratic family: b must have " + std::to_string(n) + " entries");
        }
        for (int i = 0; i < n; ++i) b(i) = jb.at(i).get<double>();
    }
    return transform::QuadraticForm(spectral::SymMatrix(a), b, j.value("c", 0.0));
}

analysis::BoundaryFamily parse_family(const json& j, int n) {
    analysis::BoundaryFamily family;
    family.id = j.at("id").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") {
        family.kind = analysis::BoundaryKind::quadratic;
        family.form = parse_form(j, n);
    } else if (kind == "cosine" || kind == "quartic") {
        family.kind =
            kind == "cosine" ? analysis::BoundaryKind::cosine : analysis::BoundaryKind::quartic;
        family.base = j.value("base", 1.0);
        family.eps = j.value("eps", 0.0);
    } else {
        throw UsageError("unknown boundary family kind \"" + kind + "\"");
    }
    return family;
}

std::vector<analysis::BoundaryFamily> parse_families(const json& j, int n) {
    if (!j.is_array() || j.empty()) {
        throw UsageError("\"families\" must be a non-empty array");
    }
    std::vector<analysis::BoundaryFamily> out;
    out.reserve(j.size());
    for (const json& entry : j) out.push_back(parse_family(entry, n));
    return out;
}

// ---------------------------------------------------------------------------
// verify

struct PropertyResult {
    std::string name;
    long samples = 0;
    double worst = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// The three per-sample checks of the eigenvalue reduction, evaluated on
/// one shared sample stream per dimension: the sigma_2(mu) identity, the
/// sigma_1 lower bound, and cone membership of mu.
void reduction_suite(const json& sec, std::uint64_t seed, std::vector<PropertyResult>& out) {
    const int n_min = sec.value("n_min", 2);
    const int n_max = sec.value("n_max", 10);
    const long samples = sec.value("samples", 10000L);

    PropertyResult identity{"reduction_identity", 0, 0.0, 1e-12, true};
    PropertyResult lower{"reduction_sigma1_lower", 0, 0.0, 1e-12, true};
    PropertyResult cone{"reduction_cone", 0, -std::numeric_limits<double>::infinity(), 0.0, true};

    Rng root(seed);
    for (int n = n_min; n <= n_max; ++n) {
        Rng rng = root.split();
        for (long s = 0; s < samples; ++s) {
            const symfun::Spectrum lambda = symfun::sample_gamma2(rng, n);
            const double s1 = symfun::sigma_k(lambda, 1);
            const double q = symfun::quotient_21(lambda);
            const symfun::Spectrum mu = symfun::reduction_shift(lambda);

            const double target = 0.5 * n / (n - 1) * q * q;
            identity.worst = std::max(
                identity.worst, std::abs(symfun::sigma_k(mu, 2) - target) / (1.0 + s1 * s1));

            lower.worst = std::max(lower.worst, 0.5 - symfun::sigma_k(mu, 1) / s1);

            cone.pass = cone.pass && symfun::in_gamma_k(mu, 2);
            cone.worst = std::max(cone.worst, -symfun::gamma_margin(mu, 2));
        }
        identity.samples += samples;
    }
    lower.samples = cone.samples = identity.samples;
    identity.pass = identity.worst <= identity.tolerance;
    lower.pass = lower.worst <= lower.tolerance;
    out.push_back(identity);
    out.push_back(lower);
    out.push_back(cone);
}

void newton_maclaurin_suite(const json& sec, std::uint64_t seed,
                            std::vector<PropertyResult>& out) {
    const int n_min = sec.value("n_min", 2);
    const int n_max = sec.value("n_max", 10);
    const long samples = sec.value("samples", 10000L);

    PropertyResult r{"newton_maclaurin_gap", 0, 0.0, 1e-12, true};
    Rng root(seed + 1);
    for (int n = n_min; n <= n_max; ++n) {
        Rng rng = root.split();
        for (long s = 0; s < samples; ++s) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.uniform(-3.0, 3.0);
            const symfun::Spectrum lambda(v);
            const double s1 = symfun::sigma_k(lambda, 1);
            r.worst = std::max(r.worst,
                               -symfun::newton_maclaurin_gap(lambda) / (1.0 + s1 * s1));
        }
        r.samples += samples;
    }
    r.pass = r.worst <= r.tolerance;
    out.push_back(r);
}

void duality_suite(const json& sec, std::uint64_t seed, std::vector<PropertyResult>& out) {
    std::vector<int> dims = sec.value("duality_n", std::vector<int>{3, 4, 5, 6, 7, 8});
    const long samples = sec.value("duality_samples", 1000L);

    PropertyResult r{"inverse_hessian_duality", 0, 0.0, 1e-10, true};
    Rng root(seed + 2);
    for (int n : dims) {
        Rng rng = root.split();
        for (long s = 0; s < samples; ++s) {
            const spectral::SymMatrix m = spectral::random_spd(rng, n, 0.5, 5.0);
            const auto [lhs, rhs] = spectral::duality_pair(m);
            r.worst = std::max(r.worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
        }
        r.samples += samples;
    }
    r.pass = r.worst <= r.tolerance;
    out.push_back(r);
}

/// Matrix shift vs eigenvalue shift on unit-quotient matrices: normalize a
/// random admissible matrix to quotient one, then both shifts must agree
/// spectrally.
void shift_consistency_suite(const json& sec, std::uint64_t seed,
                             std::vector<PropertyResult>& out) {
    const long samples = sec.value("shift_samples", 200L);
    PropertyResult r{"matrix_shift_consistency", 0, 0.0, 1e-11, true};
    Rng root(seed + 3);
    for (int n = 2; n <= 6; ++n) {
        Rng rng = root.split();
        for (long s = 0; s < samples; ++s) {
            const symfun::Spectrum lambda = symfun::sample_gamma2(rng, n);
            const Eigen::MatrixXd q = spectral::random_orthogonal(rng, n);
            Eigen::MatrixXd raw =
                q * lambda.values().asDiagonal() * q.transpose();
            const spectral::SymMatrix s0(raw);
            const double quotient =
                spectral::matrix_operator(s0, spectral::OperatorDescriptor::quotient21());
            const spectral::SymMatrix s1(raw / quotient);

            const spectral::EigenDecomposition before = spectral::eigen(s1);
            const symfun::Spectrum mu = symfun::reduction_shift(before.eigenvalues);
            const spectral::EigenDecomposition after =
                spectral::eigen(transform::hessian_shift(s1, n));
            for (int i = 0; i < n; ++i) {
                r.worst = std::max(r.worst, std::abs(after.eigenvalues[i] - mu[i]));
            }
        }
        r.samples += samples;
    }
    r.pass = r.worst <= r.tolerance;
    out.push_back(r);
}

/// discrete_hessian(subtract_reduction_quadratic(u)) vs
/// discrete_hessian(u) - I/(n-1) on random fields.
void commutation_suite(const json& sec, std::uint64_t seed, std::vector<PropertyResult>& out) {
    const long samples = sec.value("grid_samples", 40L);
    PropertyResult r{"discrete_commutation", 0, 0.0, 1e-12, true};
    Rng root(seed + 4);
    for (int n : {2, 3}) {
        Rng rng = root.split();
        const grid::Grid g = grid::Grid::symmetric(n, 1.0, 7);
        const grid::InteriorMap map(g);
        for (long s = 0; s < samples; ++s) {
            Eigen::VectorXd values(g.node_count());
            for (std::int64_t i = 0; i < g.node_count(); ++i) values(i) = rng.uniform(-1.0, 1.0);
            const grid::GridFunction u(g, values);
            const grid::GridFunction v = transform::subtract_reduction_quadratic(u);
            for (int a = 0; a < map.count(); ++a) {
                Eigen::MatrixXd expect =
                    pde::discrete_hessian(u, map.grid_flat(a)).matrix();
                expect.diagonal().array() -= 1.0 / (n - 1);
                const Eigen::MatrixXd got =
                    pde::discrete_hessian(v, map.grid_flat(a)).matrix();
                r.worst = std::max(r.worst, (got - expect).cwiseAbs().maxCoeff());
            }
            ++r.samples;
        }
    }
    r.pass = r.worst <= r.tolerance;
    out.push_back(r);
}

/// Double Legendre conjugation of convex quadratics returns the input to
/// O(h^2); the suite measures the error at three resolutions and checks
/// the second-order decay band.
void legendre_suite(const json& sec, std::vector<PropertyResult>& out) {
    (void)sec;
    PropertyResult r{"legendre_involution_decay", 0, 0.0, 0.15, true};
    const int resolutions[] = {9, 17, 33};
    for (double a : {1.0, 2.5}) {
        double errors[3];
        for (int k = 0; k < 3; ++k) {
            const grid::Grid g = grid::Grid::symmetric(2, 1.0, resolutions[k]);
            const transform::QuadraticForm q(
                spectral::SymMatrix(a * Eigen::MatrixXd::Identity(2, 2)));
            const grid::GridFunction u = transform::eval_quadratic(q, g);
            const transform::LegendreResult w = transform::discrete_legendre(u);
            // The conjugate is convex by construction (a max of affine
            // functions) but piecewise linear, so the strict discrete
            // convexity proxy can fail on it; skip the check.
            const transform::LegendreResult z =
                transform::discrete_legendre(w.conjugate, /*check_convexity=*/false);
            double err = 0.0;
            const grid::Grid& zg = z.conjugate.grid;
            for (std::int64_t f = 0; f < zg.node_count(); ++f) {
                const Eigen::VectorXd x = zg.coords(zg.multi_index(f));
                err = std::max(err, std::abs(z.conjugate.values(f) - q(x)));
            }
            errors[k] = err;
            ++r.samples;
        }
        for (int k = 0; k + 1 < 3; ++k) {
            const double ratio = errors[k + 1] / errors[k];
            r.worst = std::max(r.worst, std::abs(ratio - 0.25));
        }
    }
    r.pass = r.worst <= r.tolerance;
    out.push_back(r);
}

int cmd_verify(const json& sec, const fs::path& out_dir, std::uint64_t seed) {
    std::vector<PropertyResult> results;
    reduction_suite(sec, seed, results);
    newton_maclaurin_suite(sec, seed, results);
    duality_suite(sec, seed, results);
    shift_consistency_suite(sec, seed, results);
    commutation_suite(sec, seed, results);
    legendre_suite(sec, results);

    bool all_pass = true;
    json props = json::array();
    for (const PropertyResult& r : results) {
        all_pass = all_pass && r.pass;
        props.push_back({{"name", r.name},
                         {"samples", r.samples},
                         {"worst", r.worst},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass}});
    }
    const json summary = {{"schema", "hql-verify/1"},
                          {"seed", seed},
                          {"properties", props},
                          {"pass", all_pass}};
    write_file_atomic(out_dir / "verify.json", summary.dump(2) + "\n");
    return all_pass ? kExitSuccess : kExitChecksFailed;
}

// ---------------------------------------------------------------------------
// solve

json report_to_json(const pde::SolveReport& report) {
    return {{"iterations", report.iterations},
            {"residual_history", report.residual_history},
            {"final_residual", report.final_residual},
            {"admissibility_margin", report.admissibility_margin},
            {"damping_history", report.damping_history},
            {"stage_iterations", report.stage_iterations}};
}

std::string residual_svg(const pde::SolveReport& report) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
        const double r = report.residual_history[i];
        x.push_back(static_cast<double>(i));
        y.push_back(std::log10(std::max(r, 1e-300)));
    }
    svg::Plot plot;
    plot.title = "Newton residual history";
    plot.xlabel = "accepted iterate";
    plot.ylabel = "log10 sup-norm residual";
    plot.add_line("residual", std::move(x), std::move(y));
    return plot.render();
}

int cmd_solve(const json& sec, const fs::path& out_dir) {
    const grid::Grid g = parse_grid(sec.at("grid"));
    const pde::OperatorKind op = parse_operator(sec.value("operator", "quotient21"));
    const double rhs = sec.at("rhs").get<double>();
    const int steps = sec.value("continuation_steps", 4);
    const analysis::BoundaryFamily family = parse_family(sec.at("boundary"), g.dim());

    const pde::ProblemSpec spec(g, op, rhs, family.sample(g), steps);
    auto [u, report] = pde::newton_solve(spec);

    write_file_atomic(out_dir / "solution.txt", grid::grid_function_to_text(u));
    json j = report_to_json(report);
    j["schema"] = "hql-solve/1";
    j["operator"] = pde::to_string(op);
    j["rhs"] = rhs;
    j["grid"] = {{"n", g.dim()}, {"m", g.nodes_per_axis()}, {"L", g.extent()}};
    j["boundary_id"] = family.id;
    j["converged"] = true;
    write_file_atomic(out_dir / "report.json", j.dump(2) + "\n");
    write_file_atomic(out_dir / "residual.svg", residual_svg(report));
    return kExitSuccess;
}

// ---------------------------------------------------------------------------
// liouville

int cmd_liouville(const json& sec, const fs::path& out_dir) {
    const grid::Grid g = parse_grid(sec.at("grid"));
    const double rhs = sec.value("rhs", 1.0);
    const int steps = sec.value("continuation_steps", 4);
    const double threshold = sec.value("fit_threshold", 1e-8);
    const std::vector<analysis::BoundaryFamily> families =
        parse_families(sec.at("families"), g.dim());

    bool all_pass = true;
    json runs = json::array();
    for (const analysis::BoundaryFamily& family : families) {
        const pde::ProblemSpec spec(g, pde::OperatorKind::quotient21, rhs, family.sample(g),
                                    steps);
        auto [u, report] = pde::newton_solve(spec);
        const analysis::RigidityReport fit = analysis::fit_quadratic(u);
        const bool pass = fit.fit_residual <= threshold;
        all_pass = all_pass && pass;
        runs.push_back({{"id", family.id},
                        {"fit_residual", fit.fit_residual},
                        {"hessian_spread", fit.hessian_spread},
                        {"newton_iters", report.iterations},
                        {"final_residual", report.final_residual},
                        {"pass", pass}});
    }
    const json summary = {{"schema", "hql-liouville/1"},
                          {"grid", {{"n", g.dim()}, {"m", g.nodes_per_axis()}, {"L", g.extent()}}},
                          {"rhs", rhs},
                          {"fit_threshold", threshold},
                          {"runs", runs},
                          {"pass", all_pass}};
    write_file_atomic(out_dir / "liouville.json", summary.dump(2) + "\n");
    return all_pass ? kExitSuccess : kExitChecksFailed;
}

// ---------------------------------------------------------------------------
// interior

analysis::InteriorConfig parse_interior_batch(const json& j) {
    analysis::InteriorConfig config;
    config.n = j.at("n").get<int>();
    config.extent = j.value("L", 1.0);
    config.resolutions = j.at("resolutions").get<std::vector<int>>();
    config.op = parse_operator(j.value("operator", "quotient21"));
    config.rhs = j.value("rhs", 1.0);
    config.continuation_steps = j.value("continuation_steps", 4);
    config.stress_multiple = j.value("stress_multiple", 10.0);
    config.families = parse_families(j.at("families"), config.n);
    config.threads = env_threads();
    return config;
}

std::string interior_svg(const std::vector<analysis::InteriorRun>& runs) {
    static const char* palette[] = {"#1f6feb", "#d73a49", "#2da44e",
                                    "#bf8700", "#8250df", "#57606a"};
    svg::Plot plot;
    plot.title = "origin Hessian vs Lipschitz norm";
    plot.xlabel = "Lipschitz estimate";
    plot.ylabel = "max |entry| of Hessian at origin";
    std::vector<std::string> ids;
    for (const analysis::InteriorRun& r : runs) {
        if (std::find(ids.begin(), ids.end(), r.boundary_id) == ids.end()) {
            ids.push_back(r.boundary_id);
        }
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
        std::vector<double> x, y;
        for (const analysis::InteriorRun& r : runs) {
            if (r.boundary_id != ids[k] || !r.ok) continue;
            if (!std::isfinite(r.lip_norm) || !std::isfinite(r.hess0_max)) continue;
            x.push_back(r.lip_norm);
            y.push_back(r.hess0_max);
        }
        plot.add_points(ids[k], std::move(x), std::move(y),
                        palette[k % (sizeof(palette) / sizeof(palette[0]))]);
    }
    return plot.render();
}

int cmd_interior(const json& sec, const fs::path& out_dir, std::uint64_t seed) {
    std::vector<json> batch_specs;
    if (sec.contains("batches")) {
        for (const json& b : sec.at("batches")) batch_specs.push_back(b);
    } else {
        batch_specs.push_back(sec);
    }
    if (batch_specs.empty()) {
        throw UsageError("interior: \"batches\" must be a non-empty array");
    }

    analysis::InteriorReport report;
    for (const json& b : batch_specs) {
        const analysis::InteriorConfig config = parse_interior_batch(b);
        analysis::InteriorReport part = analysis::interior_estimate_experiment(config);
        for (analysis::InteriorRun& r : part.runs) report.runs.push_back(std::move(r));
    }

    bool all_ok = true;
    json runs = json::array();
    for (const analysis::InteriorRun& r : report.runs) {
        all_ok = all_ok && r.ok;
        json e = {{"run_id", r.run_id},
                  {"n", r.n},
                  {"m", r.m},
                  {"L", r.extent},
                  {"boundary_id", r.boundary_id},
                  {"ok", r.ok},
                  {"newton_iters", r.newton_iters},
                  {"stress_flag", r.stress_flag}};
        if (r.ok) {
            e["lip_norm"] = r.lip_norm;
            e["hess0_max"] = r.hess0_max;
            e["hess0_spec"] = r.hess0_spec;
            e["K_semiconvex"] = r.k_semiconvex;
            e["condition_margin"] = r.condition_margin;
            e["final_residual"] = r.final_residual;
            e["center_value"] = r.center_value;
        } else {
            e["failure"] = r.failure;
        }
        runs.push_back(std::move(e));
    }
    const json summary = {
        {"schema", "hql-interior/1"}, {"seed", seed}, {"runs", runs}, {"all_ok", all_ok}};

    write_file_atomic(out_dir / "interior.csv", report.to_csv());
    write_file_atomic(out_dir / "interior.json", summary.dump(2) + "\n");
    write_file_atomic(out_dir / "interior.svg", interior_svg(report.runs));
    return all_ok ? kExitSuccess : kExitSolver;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"numerical laboratory for the sigma_2/sigma_1 Hessian quotient"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;

    const char* names[] = {"verify", "solve", "liouville", "interior"};
    const char* blurbs[] = {"run the identity/property suites",
                            "one Dirichlet solve from config",
                            "quadratic-boundary rigidity probe",
                            "interior-estimate batch report"};
    for (int i = 0; i < 4; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "override the config seed")
            ->each([&seed_given](const std::string&) { seed_given = true; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        const json cfg = load_config(config_path);
        const std::uint64_t effective_seed =
            seed_given ? seed : cfg.value("seed", kDefaultSeed);
        const fs::path out(out_dir);
        fs::create_directories(out);

        if (app.got_subcommand("verify")) return cmd_verify(cfg.at("verify"), out, effective_seed);
        if (app.got_subcommand("solve")) return cmd_solve(cfg.at("solve"), out);
        if (app.got_subcommand("liouville")) return cmd_liouville(cfg.at("liouville"), out);
        return cmd_interior(cfg.at("interior"), out, effective_seed);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const pde::SolveError& e) {
        std::fprintf(stderr, "solver failure (%s): %s\n", pde::to_string(e.kind()).c_str(),
                     e.what());
        return kExitSolver;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "filesystem error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return kExitDomain;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    }
}

}  // namespace hql::cli
