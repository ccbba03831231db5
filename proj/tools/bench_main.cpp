// Benchmark and file-format front end.
//
//   bench precision --dim 6 --size 12 --spacing 0.5 --kind polynomial --order 5
//   bench speed     ... --compare-iterative
//   bench verify
//   bench grid save PATH [build flags] / bench grid load PATH
//
// Exit codes: 0 success, 1 audit or runtime failure, 2 domain/config error,
// 3 memory-guard refusal.

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcube/bench.hpp"
#include "mcube/error.hpp"
#include "mcube/grid.hpp"

namespace {

struct CliOptions {
    mcube::BenchConfig config;
    std::string kind = "polynomial";
    std::string format = "pretty";
    bool compare_iterative = false;
    std::string path;
};

void add_common_flags(CLI::App* cmd, CliOptions& options) {
    cmd->add_option("--dim", options.config.dim, "Number of dimensions")->check(CLI::Range(1, 32));
    cmd->add_option("--size", options.config.size, "Knots per dimension");
    cmd->add_option("--spacing", options.config.spacings,
                    "Grid spacing; repeat for a sweep, one table row each");
    cmd->add_option("--kind", options.kind, "1-D interpolation algorithm")
        ->check(CLI::IsMember({"linear", "polynomial", "rational"}));
    cmd->add_option("--order", options.config.order, "Knots consumed per dimension");
    cmd->add_option("--samples", options.config.samples, "Query points per row");
    cmd->add_option("--seed", options.config.seed, "Sample RNG seed");
    cmd->add_option("--anchor", options.config.anchor,
                    "Center of the sampled region (default: lowest placement that keeps "
                    "every knot at or above the function's reference box)");
    cmd->add_option("--function", options.config.function, "Benchmark function")
        ->check(CLI::IsMember(mcube::benchmark_names()));
    cmd->add_flag("--allow-extrapolation", options.config.allow_extrapolation,
                  "Permit queries outside the mesh hull");
    cmd->add_option("--format", options.format, "Table format")
        ->check(CLI::IsMember({"tsv", "pretty"}));
}

int run(const CLI::App& app, CliOptions& options) {
    options.config.kind = mcube::parse_kind(options.kind);
    const mcube::TableFormat format =
        options.format == "tsv" ? mcube::TableFormat::tsv : mcube::TableFormat::pretty;

    if (app.got_subcommand("precision")) {
        const std::vector<mcube::BenchRow> rows = mcube::run_precision(options.config);
        std::cout << mcube::emit(rows, format);
        return 0;
    }

    if (app.got_subcommand("speed")) {
        const mcube::SpeedReport report =
            mcube::run_speed(options.config, options.compare_iterative);
        std::vector<mcube::BenchRow> rows{report.recursive};
        if (report.iterative) {
            rows.push_back(*report.iterative);
        }
        std::cout << mcube::emit(rows, format);
        if (report.iterative) {
            std::cout << "recursive/iterative speed ratio: "
                      << report.recursive.queries_per_sec / report.iterative->queries_per_sec
                      << "\n";
        }
        return 0;
    }

    if (app.got_subcommand("verify")) {
        return mcube::run_verify(std::cout) == 0 ? 0 : 1;
    }

    const CLI::App* grid_cmd = app.get_subcommand("grid");
    if (grid_cmd->got_subcommand("save")) {
        const mcube::BenchmarkFunction fn =
            mcube::find_benchmark(options.config.function, options.config.dim);
        mcube::BenchConfig config = options.config;
        const double spacing = config.spacings.front();
        const double span = spacing * static_cast<double>(config.size - 1);
        std::vector<std::vector<double>> axes(config.dim);
        for (std::size_t i = 0; i < config.dim; ++i) {
            const double anchor =
                std::isnan(config.anchor) ? fn.domain[i].first + span / 2.0 : config.anchor;
            axes[i].resize(config.size);
            for (std::size_t k = 0; k < config.size; ++k) {
                axes[i][k] = anchor - span / 2.0 + spacing * static_cast<double>(k);
            }
        }
        const mcube::Grid grid = mcube::build_grid(mcube::Mesh(axes), fn.eval);
        std::ofstream out(options.path, std::ios::binary);
        if (!out) {
            throw mcube::io_error("cannot open '" + options.path + "' for writing");
        }
        grid.save(out);
        std::cout << "saved " << fn.name << " grid (" << config.dim << " dims, " << config.size
                  << " knots/dim, spacing " << spacing << ") to " << options.path << "\n";
        return 0;
    }

    // grid load
    std::ifstream in(options.path, std::ios::binary);
    if (!in) {
        throw mcube::io_error("cannot open '" + options.path + "' for reading");
    }
    const mcube::Grid grid = mcube::Grid::load(in);
    std::cout << "grid: " << grid.mesh().rank() << " dims, sizes [";
    for (std::size_t i = 0; i < grid.mesh().rank(); ++i) {
        std::cout << (i ? ", " : "") << grid.data().spec().size(i);
    }
    std::cout << "], offsets [";
    for (std::size_t i = 0; i < grid.mesh().rank(); ++i) {
        std::cout << (i ? ", " : "") << grid.data().spec().offset(i);
    }
    std::cout << "], " << grid.data().spec().element_count() << " values\n";
    for (std::size_t i = 0; i < grid.mesh().rank(); ++i) {
        const auto axis = grid.mesh().axis(i);
        std::cout << "  axis " << i + 1 << ": [" << axis.front() << ", " << axis.back() << "]\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"N-dimensional grid interpolation benchmark"};
    app.require_subcommand(1);
    CliOptions options;

    CLI::App* precision = app.add_subcommand("precision", "Interpolation error table");
    add_common_flags(precision, options);

    CLI::App* speed = app.add_subcommand("speed", "Query throughput");
    add_common_flags(speed, options);
    speed->add_flag("--compare-iterative", options.compare_iterative,
                    "Also time the stage-materializing baseline");

    app.add_subcommand("verify", "Equivalence and counter audits");

    CLI::App* grid_cmd = app.add_subcommand("grid", "Grid file operations");
    grid_cmd->require_subcommand(1);
    CLI::App* grid_save = grid_cmd->add_subcommand("save", "Build a grid and write it");
    grid_save->add_option("path", options.path, "Output file")->required();
    add_common_flags(grid_save, options);
    CLI::App* grid_load = grid_cmd->add_subcommand("load", "Read a grid file and summarize it");
    grid_load->add_option("path", options.path, "Input file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(app, options);
    } catch (const mcube::memory_guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mcube::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mcube::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
