// Command-line front end: solve quarter medians for CSV point files, trace
// the median curve and the quadrant-count scan, draw samples from elliptical
// models, run the replication harness, and print the efficiency table.
//
// Exit codes: 0 success, 2 input/parameter error, 3 file I/O error,
// 4 numerical or internal failure.

#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qmed/qmed.hpp>

namespace {

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const qmed::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qmed::not_found& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {  // invalid/degenerate input, CSV
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {  // numerical and internal failures
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

struct ModelFlags {
    std::string family = "normal";
    std::vector<double> mu{0.0, 0.0};
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double orientation = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family,
                        "density generator: normal, double_exponential, cauchy, "
                        "pearson2, logistic")
            ->capture_default_str();
        cmd->add_option("--mu", mu, "center (two numbers)")
            ->expected(2)
            ->capture_default_str();
        cmd->add_option("--lambda1", lambda1, "larger dispersion eigenvalue")
            ->capture_default_str();
        cmd->add_option("--lambda2", lambda2, "smaller dispersion eigenvalue")
            ->capture_default_str();
        cmd->add_option("--orientation", orientation,
                        "angle of the first dispersion eigenvector (radians)")
            ->capture_default_str();
    }
    qmed::EllipticalModel model() const {
        return {qmed::DensityGenerator::from_name(family), {mu[0], mu[1]}, lambda1,
                lambda2, orientation};
    }
    void describe(qmed::RunManifest& m) const {
        m.add("family", family);
        m.add("mu", qmed::detail::fmt_g17(mu[0]) + " " + qmed::detail::fmt_g17(mu[1]));
        m.add("lambda1", lambda1);
        m.add("lambda2", lambda2);
        m.add("orientation", orientation);
    }
};

void print_solution_block(const qmed::QuarterMedianSolution& s) {
    using qmed::detail::fmt_g17;
    const qmed::MassReport& r = s.report;
    std::cout << "canonical_theta: " << fmt_g17(s.theta.x) << " " << fmt_g17(s.theta.y)
              << "\n";
    std::cout << "canonical_alpha_rad: " << fmt_g17(s.frame.alpha()) << "\n";
    std::cout << "canonical_alpha_deg: " << fmt_g17(s.frame.alpha() * 180.0 / qmed::kPi)
              << "\n";
    std::cout << "halfplane_mass: " << fmt_g17(r.half_masses[0]) << " "
              << fmt_g17(r.half_masses[1]) << " " << fmt_g17(r.half_masses[2]) << " "
              << fmt_g17(r.half_masses[3]) << "\n";
    std::cout << "quadrant_mass: " << fmt_g17(r.quad_masses[0]) << " "
              << fmt_g17(r.quad_masses[1]) << " " << fmt_g17(r.quad_masses[2]) << " "
              << fmt_g17(r.quad_masses[3]) << "\n";
}

void cmd_solve(const std::string& input, const std::string& method, std::size_t grid,
               const std::string& command) {
    const std::vector<qmed::Vec2> rows = qmed::read_points_csv_file(input);
    const qmed::PointSet ps(rows);
    const qmed::SolveResult res =
        method == "scan" ? qmed::solve_scan(ps, grid) : qmed::solve_exact(ps);

    qmed::RunManifest man;
    man.command = command;
    man.add("input", input);
    man.add("method", method);
    if (method == "scan") man.add("grid", static_cast<std::uint64_t>(grid));

    std::cout << "qmed-solve/1\n";
    for (const std::string& l : qmed::detail::manifest_lines(man))
        std::cout << "# " << l << "\n";
    std::cout << "n_rows: " << rows.size() << "\n";
    std::cout << "n_distinct: " << ps.size() << "\n";
    print_solution_block(res.canonical());
    const std::size_t cap = 32;
    std::cout << "solutions_total: " << res.solutions.size() << "\n";
    std::cout << "solutions_shown: " << std::min(cap, res.solutions.size()) << "\n";
    for (std::size_t k = 0; k < res.solutions.size() && k < cap; ++k) {
        const qmed::QuarterMedianSolution& s = res.solutions[k];
        std::cout << "solution: " << qmed::detail::fmt_g17(s.theta.x) << " "
                  << qmed::detail::fmt_g17(s.theta.y) << " "
                  << qmed::detail::fmt_g17(s.frame.alpha()) << "\n";
    }
    std::cout << "candidates_checked: " << res.candidates_checked << "\n";
}

void require_grid(std::size_t grid) {
    if (grid < 8) throw qmed::invalid_input("grid must be at least 8");
}

void write_outputs(const std::string& out_csv, const std::string& out_svg,
                   const std::string& csv, const std::string& svg) {
    if (out_csv.empty() && out_svg.empty())
        throw qmed::invalid_input("need --out-csv and/or --out-svg");
    if (!out_csv.empty()) qmed::write_text_file(out_csv, csv);
    if (!out_svg.empty()) qmed::write_text_file(out_svg, svg);
}

void cmd_curve(const std::string& input, std::size_t grid, const std::string& out_csv,
               const std::string& out_svg, const std::string& command) {
    require_grid(grid);
    const qmed::PointSet ps(qmed::read_points_csv_file(input));
    const std::vector<qmed::CurvePoint> curve = qmed::median_curve(ps, grid);

    qmed::RunManifest man;
    man.command = command;
    man.add("input", input);
    man.add("grid", static_cast<std::uint64_t>(grid));
    write_outputs(out_csv, out_svg, qmed::curve_csv(curve, man),
                  qmed::curve_svg(curve, ps.points(), man));
}

void cmd_scan(const std::string& input, std::size_t grid, const std::string& out_csv,
              const std::string& out_svg, const std::string& command) {
    require_grid(grid);
    const qmed::PointSet ps(qmed::read_points_csv_file(input));
    const std::vector<qmed::ScanPoint> scan = qmed::scan_count_curve(ps, grid);

    qmed::RunManifest man;
    man.command = command;
    man.add("input", input);
    man.add("grid", static_cast<std::uint64_t>(grid));
    write_outputs(out_csv, out_svg, qmed::scan_csv(scan, man),
                  qmed::scan_svg(scan, ps.size() / 4.0, man));
}

void cmd_sample(const ModelFlags& mf, std::size_t n, std::uint64_t seed,
                const std::string& out_csv, const std::string& command) {
    const qmed::EllipticalModel model = mf.model();
    qmed::RandomStream stream(seed);
    const std::vector<qmed::Vec2> pts = model.sample_raw(n, stream);

    qmed::RunManifest man;
    man.command = command;
    mf.describe(man);
    man.add("n", static_cast<std::uint64_t>(n));
    man.add("seed", seed);
    const std::string csv = qmed::points_csv(pts, man);
    if (out_csv.empty())
        std::cout << csv;
    else
        qmed::write_text_file(out_csv, csv);
}

void simulate_one(const qmed::ExperimentConfig& cfg, const qmed::RunManifest& man) {
    const qmed::ExperimentReport report = qmed::run_experiment(cfg);
    const std::vector<qmed::LimitEntry> limits = qmed::theoretical_limits(cfg.model);
    std::cout << qmed::report_document(report, limits, man) << "\n"
              << qmed::report_table(report, limits) << std::flush;
    std::cerr << "# wall_seconds " << report.wall_seconds << "\n";
}

void cmd_simulate(const ModelFlags& mf, std::size_t n, std::size_t reps,
                  std::uint64_t seed, const std::string& estimators, unsigned workers,
                  bool full_scale, const std::string& prog) {
    std::vector<qmed::Estimator> ests;
    {
        std::string tok;
        for (char c : estimators + ",") {
            if (c == ',') {
                if (!tok.empty()) ests.push_back(qmed::estimator_from_name(tok));
                tok.clear();
            } else {
                tok += c;
            }
        }
    }

    // The echoed command is reconstructed from the parsed values rather than
    // taken from argv: the report must be byte-identical across worker
    // counts, and --workers is a scheduling knob with no effect on results.
    using qmed::detail::fmt_g17;
    std::string command = prog + " simulate --family " + mf.family + " --mu " +
                          fmt_g17(mf.mu[0]) + " " + fmt_g17(mf.mu[1]) + " --lambda1 " +
                          fmt_g17(mf.lambda1) + " --lambda2 " + fmt_g17(mf.lambda2) +
                          " --orientation " + fmt_g17(mf.orientation);
    if (full_scale)
        command += " --full-scale --seed " + std::to_string(seed);
    else
        command += " --n " + std::to_string(n) + " --reps " + std::to_string(reps) +
                   " --seed " + std::to_string(seed) + " --estimators " + estimators;

    if (!full_scale) {
        qmed::ExperimentConfig cfg{mf.model(), n,       reps, seed,
                                   ests,       workers, true};
        qmed::RunManifest man;
        man.command = command;
        mf.describe(man);
        man.add("n", static_cast<std::uint64_t>(n));
        man.add("reps", static_cast<std::uint64_t>(reps));
        man.add("seed", seed);
        man.add("estimators", estimators);
        simulate_one(cfg, man);
        return;
    }

    // Full protocol: the four families with finite Oja objective, the four
    // eigenvalue ratios, 10^4 replications of size 100, estimators
    // smed/omed/tmed/qmed. Takes hours; per-cell seeds derive from --seed.
    const std::vector<std::string> families{"normal", "double_exponential", "pearson2",
                                            "logistic"};
    const std::vector<double> lambdas{0.01, 0.1, 0.5, 0.9};
    const std::vector<qmed::Estimator> cell_ests{
        qmed::Estimator::smed, qmed::Estimator::omed, qmed::Estimator::tmed,
        qmed::Estimator::qmed};
    std::size_t cell = 0;
    for (const std::string& fam : families) {
        for (double lambda : lambdas) {
            const std::uint64_t cell_seed = seed + 1000003ull * (cell + 1);
            qmed::EllipticalModel model(qmed::DensityGenerator::from_name(fam), {0, 0},
                                        1.0, lambda, 0.0);
            qmed::ExperimentConfig cfg{model, 100, 10000, cell_seed, cell_ests, workers,
                                       true};
            qmed::RunManifest man;
            man.command = command;
            man.add("family", fam);
            man.add("lambda", lambda);
            man.add("n", static_cast<std::uint64_t>(100));
            man.add("reps", static_cast<std::uint64_t>(10000));
            man.add("seed", cell_seed);
            std::cout << "# cell " << cell << ": " << fam << " lambda=" << lambda << "\n";
            simulate_one(cfg, man);
            ++cell;
        }
    }
}

void cmd_efficiencies() {
    const std::vector<qmed::EfficiencyRow> rows = qmed::efficiency_table();
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-20s %-24s %-24s\n", "family", "eff_mean",
                  "eff_qmed");
    std::cout << buf;
    auto cell = [](const std::string& form, double value) {
        char num[64];
        if (form.empty())
            std::snprintf(num, sizeof num, "%.8f", value);
        else
            std::snprintf(num, sizeof num, "%s = %.8f", form.c_str(), value);
        return std::string(num);
    };
    for (const qmed::EfficiencyRow& r : rows) {
        const std::string mean_cell = r.eff_mean ? cell(r.mean_form, *r.eff_mean) : "-";
        std::snprintf(buf, sizeof buf, "%-20s %-24s %-24s\n", r.family.c_str(),
                      mean_cell.c_str(), cell(r.qmed_form, r.eff_qmed).c_str());
        std::cout << buf;
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string command = join_args(argc, argv);
    CLI::App app{"quarter median toolkit"};
    app.set_version_flag("--version", std::string(qmed::kVersion));
    app.require_subcommand(1);

    // solve
    std::string in_solve, method = "exact";
    std::size_t grid_solve = 720;
    CLI::App* solve = app.add_subcommand("solve", "compute the quarter median of a CSV file");
    solve->add_option("--input", in_solve, "CSV file of x,y rows")->required();
    solve->add_option("--method", method, "exact or scan")
        ->check(CLI::IsMember({"exact", "scan"}))
        ->capture_default_str();
    solve->add_option("--grid", grid_solve, "scan grid resolution")->capture_default_str();

    // curve
    std::string in_curve, curve_csv_path, curve_svg_path;
    std::size_t grid_curve = 720;
    CLI::App* curve = app.add_subcommand("curve", "trace the median curve");
    curve->add_option("--input", in_curve, "CSV file of x,y rows")->required();
    curve->add_option("--grid", grid_curve, "number of sweep angles (>= 8)")
        ->capture_default_str();
    curve->add_option("--out-csv", curve_csv_path, "CSV output path");
    curve->add_option("--out-svg", curve_svg_path, "SVG output path");

    // scan
    std::string in_scan, scan_csv_path, scan_svg_path;
    std::size_t grid_scan = 720;
    CLI::App* scan = app.add_subcommand("scan", "count the open upper-right quadrant");
    scan->add_option("--input", in_scan, "CSV file of x,y rows")->required();
    scan->add_option("--grid", grid_scan, "number of sweep angles (>= 8)")
        ->capture_default_str();
    scan->add_option("--out-csv", scan_csv_path, "CSV output path");
    scan->add_option("--out-svg", scan_svg_path, "SVG output path");

    // sample
    ModelFlags mf_sample;
    std::size_t n_sample = 100;
    std::uint64_t seed_sample = 1;
    std::string sample_csv_path;
    CLI::App* sample = app.add_subcommand("sample", "draw from an elliptical model");
    mf_sample.attach(sample);
    sample->add_option("--n", n_sample, "number of draws")->capture_default_str();
    sample->add_option("--seed", seed_sample, "master seed")->capture_default_str();
    sample->add_option("--out-csv", sample_csv_path, "CSV output path (default stdout)");

    // simulate
    ModelFlags mf_sim;
    std::size_t n_sim = 100, reps_sim = 1000;
    std::uint64_t seed_sim = 1;
    std::string est_sim = "mean,qmed,smed,omed";
    unsigned workers_sim = 0;
    bool full_scale = false;
    CLI::App* simulate = app.add_subcommand("simulate", "run the replication harness");
    mf_sim.attach(simulate);
    simulate->add_option("--n", n_sim, "sample size per replication")->capture_default_str();
    simulate->add_option("--reps", reps_sim, "replication count")->capture_default_str();
    simulate->add_option("--seed", seed_sim, "master seed")->capture_default_str();
    simulate->add_option("--estimators", est_sim, "comma list of mean,qmed,smed,omed,tmed")
        ->capture_default_str();
    simulate->add_option("--workers", workers_sim, "worker threads (0 = all cores)")
        ->capture_default_str();
    simulate->add_flag("--full-scale", full_scale,
                       "run the complete published protocol (takes hours)");

    // efficiencies
    app.add_subcommand("efficiencies", "print the asymptotic efficiency table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (solve->parsed())
        return run_guarded([&] { cmd_solve(in_solve, method, grid_solve, command); });
    if (curve->parsed())
        return run_guarded(
            [&] { cmd_curve(in_curve, grid_curve, curve_csv_path, curve_svg_path, command); });
    if (scan->parsed())
        return run_guarded(
            [&] { cmd_scan(in_scan, grid_scan, scan_csv_path, scan_svg_path, command); });
    if (sample->parsed())
        return run_guarded(
            [&] { cmd_sample(mf_sample, n_sample, seed_sample, sample_csv_path, command); });
    if (simulate->parsed())
        return run_guarded([&] {
            cmd_simulate(mf_sim, n_sim, reps_sim, seed_sim, est_sim, workers_sim,
                         full_scale, argv[0]);
        });
    return run_guarded([] { cmd_efficiencies(); });
}
