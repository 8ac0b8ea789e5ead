#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gridsym/expected.hpp"
#include "gridsym/experiments.hpp"
#include "gridsym/io.hpp"

namespace {

using namespace gridsym;

MatrixSymbol named_symbol(const std::string& name, std::int64_t order) {
    if (name == "triangle") return triangle_symbol(order);
    if (name == "five-point") return five_point_symbol();
    if (name == "disk") return disk_symbol();
    if (name == "diamond") return diamond_symbol();
    if (name == "spline-block") return quadratic_spline_block_symbol();
    if (name == "spline-scalar") return smooth_spline_symbol();
    if (name == "laplace-1d") return one_d_laplacian_symbol();
    if (name == "linear-interp") return cosine_polynomial({2.0, 2.0});
    if (name == "seven-point") return cosine_polynomial({4.0, 6.0, 4.0, 2.0});
    throw CLI::ValidationError("symbol", "unknown symbol name: " + name);
}

std::string table_file_stem(int number) {
    std::ostringstream os;
    os << "table" << (number < 10 ? "0" : "") << number;
    return os.str();
}

/// Flat key=value configuration mirroring the experiment flags; values from
/// the file seed the defaults, explicit flags win.
void load_config_file(const std::string& path, ExperimentConfig& cfg, std::string& out_dir, bool& check) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    while (std::getline(f, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) continue;
        if (key == "id")
            cfg.id = value;
        else if (key == "t-min")
            cfg.t_min = std::stoll(value);
        else if (key == "t-max")
            cfg.t_max = std::stoll(value);
        else if (key == "tol")
            cfg.tolerance = std::stod(value);
        else if (key == "max-iterations")
            cfg.max_iterations = std::stoll(value);
        else if (key == "seed")
            cfg.seed = std::stoull(value);
        else if (key == "out")
            out_dir = value;
        else if (key == "check")
            check = value == "1" || value == "true";
        else
            throw std::runtime_error("unknown config key: " + key);
    }
}

int run_experiment_cmd(const ExperimentConfig& cfg, const std::string& out_dir, bool check) {
    Table tab = run_experiment(cfg);
    std::cout << tab.to_markdown() << "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto stem = (std::filesystem::path(out_dir) / table_file_stem(tab.number)).string();
        write_file(stem + ".csv", tab.to_csv());
        write_file(stem + ".md", tab.to_markdown());
        std::cout << "wrote " << stem << ".{csv,md}\n";
    }
    if (check) {
        auto bad = expected::check_table(tab);
        for (const auto& b : bad) std::cerr << "CHECK FAIL: " << b << "\n";
        if (!bad.empty()) return 2;
        std::cout << "all checks passed\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid graph Laplacians with symbol-guided multigrid and PCG solvers"};

    std::string out_dir;
    ExperimentConfig cfg;
    bool check = false;

    // seed the experiment defaults from --config before CLI11 parses; flags win
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                load_config_file(argv[i + 1], cfg, out_dir, check);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
        }
    }
    std::string config_path;

    auto* exp = app.add_subcommand("experiment", "run one of the built-in experiments");
    exp->add_option("--config", config_path, "flat key=value configuration file; command-line flags win");
    exp->add_option("id", cfg.id, "experiment id")->required()->check(CLI::IsMember(experiment_ids()));
    exp->add_option("--t-min", cfg.t_min, "first size level");
    exp->add_option("--t-max", cfg.t_max, "last size level");
    exp->add_option("--tol", cfg.tolerance, "solver tolerance");
    exp->add_option("--max-iterations", cfg.max_iterations, "iteration cap");
    exp->add_option("--seed", cfg.seed, "offset for the deterministic right-hand sides");
    exp->add_option("--out", out_dir, "directory for tableNN.csv / tableNN.md");
    exp->add_flag("--check", check, "verify against the reference windows; exit 2 on violation");

    std::string sym_name = "laplace-1d";
    std::string plot_csv;
    std::int64_t sym_order = 16;
    std::int64_t resolution = 256;
    auto* sym = app.add_subcommand("symbol", "sample eigenvalue curves of a named symbol");
    sym->add_option("name", sym_name, "symbol name")->required();
    sym->add_option("--plot-csv", plot_csv, "output CSV of eigenvalue curves");
    sym->add_option("--order", sym_order, "truncation order for series symbols");
    sym->add_option("--resolution", resolution, "grid points per angle axis");

    std::string check_what;
    std::string f_name = "laplace-1d", p_name = "linear-interp";
    std::int64_t factor = 2;
    std::vector<double> theta0;
    auto* chk = app.add_subcommand("check", "verify projector conditions for a symbol/polynomial pair");
    chk->add_option("what", check_what, "what to check (projector)")->required();
    chk->add_option("--f", f_name, "system symbol");
    chk->add_option("--p", p_name, "projector polynomial symbol");
    chk->add_option("--g", factor, "coarsening factor");
    chk->add_option("--order", sym_order, "truncation order for series symbols");
    chk->add_option("--theta0", theta0, "location of the symbol zero (default: origin)");

    std::string export_what;
    std::string exp_id = "iga-pcg";
    std::int64_t exp_t = 7;
    std::string matrix_out = "matrix.mtx";
    std::string rhs_out;
    auto* ex = app.add_subcommand("export", "export an assembled matrix (Matrix Market)");
    ex->add_option("what", export_what, "what to export (matrix)")->required();
    ex->add_option("--experiment", exp_id, "experiment id")->check(CLI::IsMember(experiment_ids()));
    ex->add_option("--t", exp_t, "size level");
    ex->add_option("--out", matrix_out, "output path");
    ex->add_option("--rhs", rhs_out, "also write the right-hand side as one-column CSV");

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        if (exp->parsed()) return run_experiment_cmd(cfg, out_dir, check);

        if (sym->parsed()) {
            MatrixSymbol f = named_symbol(sym_name, sym_order);
            auto sample = symbol_eigencurves(f, resolution);
            std::ostringstream os;
            for (std::size_t r = 0; r < f.dim(); ++r) os << "theta" << r + 1 << ",";
            for (std::int64_t j = 0; j < f.block_size(); ++j) os << (j ? "," : "") << "lambda" << j + 1;
            os << "\n";
            // the sample grid is the midpoint rule over [0,pi]^d in lex order
            IndexRange grid(MultiIndex(f.dim(), resolution));
            std::size_t i = 0;
            grid.for_each([&](const MultiIndex& k) {
                for (std::size_t r = 0; r < f.dim(); ++r)
                    os << (static_cast<double>(k[r]) - 0.5) * std::numbers::pi / static_cast<double>(resolution) << ",";
                for (std::size_t j = 0; j < sample.curves.size(); ++j)
                    os << (j ? "," : "") << sample.curves[j][i];
                os << "\n";
                ++i;
            });
            if (plot_csv.empty())
                std::cout << os.str();
            else {
                write_file(plot_csv, os.str());
                std::cout << "wrote " << plot_csv << "\n";
            }
            for (std::size_t j = 0; j < sample.curve_min.size(); ++j)
                std::cout << "min lambda" << j + 1 << " = " << sample.curve_min[j] << "\n";
            return 0;
        }

        if (chk->parsed()) {
            if (check_what != "projector") throw std::invalid_argument("only 'check projector' is supported");
            MatrixSymbol f = named_symbol(f_name, sym_order);
            MatrixSymbol p = named_symbol(p_name, sym_order);
            if (theta0.empty()) theta0.assign(f.dim(), 0.0);
            auto rep = check_projector_conditions(f, p, theta0, factor);
            std::cout << "ratio bounded:   " << (rep.bounded_ratio ? "yes" : "NO") << " (final ring sup "
                      << rep.final_ring_sup << ")\n";
            std::cout << "corner sum > 0:  " << (rep.positive_sum ? "yes" : "NO") << " (min " << rep.min_corner_sum
                      << ")\n";
            return rep.pass() ? 0 : 2;
        }

        if (ex->parsed()) {
            if (export_what != "matrix") throw std::invalid_argument("only 'export matrix' is supported");
            ProblemInstance prob;
            if (exp_id == "triangle-dirichlet" || exp_id == "triangle-error")
                prob = build_triangle_dirichlet(exp_id == "triangle-error" ? (1ll << exp_t) - 2
                                                                           : triangle_partial_dim(exp_t));
            else if (exp_id == "triangle-neumann" || exp_id == "triangle-eigs")
                prob = build_triangle_neumann(triangle_partial_dim(exp_t));
            else if (exp_id == "disk-mgm")
                prob = build_disk(1ll << exp_t);
            else if (exp_id == "diamond-nhdp") {
                std::int64_t diamonds = 1;
                for (std::int64_t q = 0; q < exp_t; ++q) diamonds *= 4;
                prob = build_diamond_interior(diamonds);
            } else if (exp_id == "fem-pcg")
                prob = build_spline_block(1ll << exp_t);
            else if (exp_id == "fem-tgm")
                prob = build_spline_block(1ll << (exp_t - 1));
            else if (exp_id == "iga-pcg")
                prob = build_spline_scalar(1ll << exp_t);
            else
                prob = build_spline_scalar((1ll << exp_t) - 1);
            std::ofstream f(matrix_out);
            if (!f) throw std::runtime_error("cannot open " + matrix_out);
            write_matrix_market(f, prob.a.sparse, prob.a.sparse.is_symmetric());
            std::cout << "wrote " << matrix_out << " (" << prob.a.rows() << "x" << prob.a.cols() << ")\n";
            if (!rhs_out.empty()) {
                std::ofstream rf(rhs_out);
                write_vector_csv(rf, prob.rhs);
                std::cout << "wrote " << rhs_out << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
