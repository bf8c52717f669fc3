// Command line front end: marker scans, frequency-relation reports, the
// Fock-space validation suite, figure datasets and phase sweeps.
//
// Exit codes: 0 success, 1 numerical/validation failure, 2 usage or config
// error, 3 oracle non-convergence.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbm/fock_oracle.hpp"
#include "qbm/fraction.hpp"
#include "qbm/markers.hpp"
#include "qbm/model.hpp"
#include "qbm/scan.hpp"

namespace {

constexpr double pi = std::numbers::pi;

// 17 significant digits: round-trips the underlying double exactly
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

unsigned env_threads() {
    const char* s = std::getenv("QBM_THREADS");
    if (!s || !*s) return 0; // auto
    const long v = std::strtol(s, nullptr, 10);
    return v > 0 ? static_cast<unsigned>(v) : 0;
}

struct LoadedConfig {
    qbm::Ensemble ensemble;
    // exact frequency-relation declarations, aligned with the oscillators
    std::vector<std::optional<std::pair<std::int64_t, std::int64_t>>> ratios;
    std::int64_t fraction_max_den = 1000;
    double fraction_eps = 1e-9;
};

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw qbm::Error(qbm::Error::Code::config_error, "cannot open config: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    LoadedConfig cfg;
    cfg.ensemble = qbm::validate(qbm::load_ensemble_json(text));

    nlohmann::json doc = nlohmann::json::parse(text);
    for (const auto& o : doc.at("oscillators")) {
        if (o.contains("ratio")) {
            const auto& r = o["ratio"];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() ||
                !r[1].is_number_integer()) {
                throw qbm::Error(qbm::Error::Code::config_error,
                                 "oscillator ratio must be [num, den] integers");
            }
            cfg.ratios.emplace_back(std::make_pair(r[0].get<std::int64_t>(),
                                                   r[1].get<std::int64_t>()));
        } else {
            cfg.ratios.emplace_back(std::nullopt);
        }
    }
    if (doc.contains("fraction")) {
        const auto& f = doc["fraction"];
        if (f.contains("max_den")) cfg.fraction_max_den = f["max_den"].get<std::int64_t>();
        if (f.contains("eps")) cfg.fraction_eps = f["eps"].get<double>();
    }
    return cfg;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw qbm::Error(qbm::Error::Code::config_error,
                                 "cannot open output file: " + path);
            }
        }
    }

    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

    void row(const std::vector<std::string>& cells) {
        auto& os = out();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    }

private:
    std::ofstream file_;
};

void write_figure_csv(const qbm::scan::FigureData& fd, const std::string& path) {
    CsvWriter w(path);
    std::vector<std::string> header = {"t"};
    header.insert(header.end(), fd.columns.begin(), fd.columns.end());
    w.row(header);
    std::vector<std::string> cells(header.size());
    for (std::size_t i = 0; i < fd.grid.size(); ++i) {
        cells[0] = fmt17(fd.grid[i]);
        for (std::size_t c = 0; c < fd.columns.size(); ++c) {
            cells[c + 1] = fmt17(fd.values[c][i]);
        }
        w.row(cells);
    }
}

// Minimal polyline plot, a visual aid only; the CSV is the contract.
void write_figure_svg(const qbm::scan::FigureData& fd, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw qbm::Error(qbm::Error::Code::config_error, "cannot open " + path);
    }
    const int width = 960, height = 500, ml = 60, mr = 20, mt = 20, mb = 40;
    const double x0 = fd.grid.front(), x1 = fd.grid.back();
    double y0 = 0.0, y1 = 1.0;
    for (const auto& col : fd.values) {
        for (double v : col) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (y1 == y0) y1 = y0 + 1.0;
    auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * (width - ml - mr); };
    auto sy = [&](double y) { return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                    "#bcbd22", "#e377c2", "#aec7e8", "#98df8a"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
       << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << height - mb << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml << "\" y=\"" << height - 10 << "\" font-size=\"12\">"
       << x0 << "</text>\n";
    os << "<text x=\"" << width - mr - 30 << "\" y=\"" << height - 10
       << "\" font-size=\"12\">" << x1 << "</text>\n";
    os << "<text x=\"8\" y=\"" << sy(y1) + 4 << "\" font-size=\"12\">" << y1 << "</text>\n";
    os << "<text x=\"8\" y=\"" << sy(y0) + 4 << "\" font-size=\"12\">" << y0 << "</text>\n";

    const std::size_t stride = std::max<std::size_t>(1, fd.grid.size() / 4000);
    for (std::size_t c = 0; c < fd.values.size(); ++c) {
        os << "<polyline fill=\"none\" stroke=\"" << palette[c % 12]
           << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < fd.grid.size(); i += stride) {
            os << sx(fd.grid[i]) << ',' << sy(fd.values[c][i]) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - mr - 110 << "\" y=\"" << mt + 14 * (c + 1)
           << "\" font-size=\"11\" fill=\"" << palette[c % 12] << "\">" << fd.columns[c]
           << "</text>\n";
    }
    os << "</svg>\n";
}

std::string parity_name(qbm::fraction::ParityClass p) {
    return p == qbm::fraction::ParityClass::odd_odd ? "OddOdd" : "EvenClass";
}

// ---------------------------------------------------------------- markers

int run_markers(const std::string& config_path, const std::string& out_path,
                int grid, double t_max) {
    const LoadedConfig cfg = load_config(config_path);
    const auto& e = cfg.ensemble;
    const int n = grid > 0 ? grid : qbm::scan::default_grid_points(e, 0.0, t_max);
    const auto series = qbm::scan::marker_series(e, 0.0, t_max, n, env_threads());

    CsvWriter w(out_path);
    std::vector<std::string> header = {"t"};
    const std::size_t nk = e.oscillators.size();
    for (std::size_t k = 1; k <= nk; ++k) header.push_back("gamma2_k" + std::to_string(k));
    for (std::size_t k = 1; k <= nk; ++k) header.push_back("overlap_k" + std::to_string(k));
    header.push_back("gamma2_total");
    header.push_back("overlap_total");
    w.row(header);

    std::vector<std::string> cells;
    for (std::size_t i = 0; i < series.grid.size(); ++i) {
        const auto& p = series.points[i];
        cells.clear();
        cells.push_back(fmt17(series.grid[i]));
        for (double v : p.gamma_sq_per_osc) cells.push_back(fmt17(v));
        for (double v : p.overlap_per_osc) cells.push_back(fmt17(v));
        cells.push_back(fmt17(p.gamma_sq_total));
        cells.push_back(fmt17(p.overlap_total));
        w.row(cells);
    }
    return 0;
}

// --------------------------------------------------------------- fraction

int run_fraction(const std::string& config_path, const std::string& out_path) {
    const LoadedConfig cfg = load_config(config_path);
    const auto& e = cfg.ensemble;
    const double omega_big = e.central.omega_big;

    std::vector<qbm::fraction::ReducedFraction> exact;
    std::ostringstream report;
    CsvWriter csv(out_path);
    csv.row({"oscillator", "omega", "num", "den", "parity", "t_min"});

    for (std::size_t k = 0; k < e.oscillators.size(); ++k) {
        const auto& osc = e.oscillators[k];
        std::optional<qbm::fraction::ReducedFraction> frac;
        if (k < cfg.ratios.size() && cfg.ratios[k]) {
            frac = qbm::fraction::reduce_ratio(cfg.ratios[k]->first, cfg.ratios[k]->second);
        } else {
            frac = qbm::fraction::rationalize(osc.omega / omega_big,
                                              cfg.fraction_max_den, cfg.fraction_eps);
        }
        if (frac) {
            exact.push_back(*frac);
            const double tm = qbm::fraction::t_min(omega_big, *frac);
            report << "k" << (k + 1) << ": " << frac->num << "/" << frac->den << " "
                   << parity_name(frac->parity) << " t_min=" << fmt17(tm) << "\n";
            csv.row({std::to_string(k + 1), fmt17(osc.omega), std::to_string(frac->num),
                     std::to_string(frac->den), parity_name(frac->parity), fmt17(tm)});
        } else {
            report << "k" << (k + 1) << ": non-fractional within eps="
                   << cfg.fraction_eps << "\n";
            csv.row({std::to_string(k + 1), fmt17(osc.omega), "", "", "non-fractional", ""});
        }
    }

    if (!exact.empty()) {
        const double common = qbm::fraction::common_recurrence(omega_big, exact);
        report << "common recurrence: " << fmt17(common) << "\n";
        if (exact.size() < e.oscillators.size()) {
            report << "(over the fractional subset only)\n";
        }
    } else {
        report << "common recurrence: none (no fractional relations)\n";
    }
    std::cout << report.str();
    return 0;
}

// ----------------------------------------------------------------- oracle

struct DrawEnvelope {
    // keeps kick displacements <= ~1, thermal tails inside dim 160 and the
    // closed form away from its resonance guard
    double ratio_lo1 = 0.3, ratio_hi1 = 0.8;
    double ratio_lo2 = 1.25, ratio_hi2 = 3.0;
    double min_lambda = 0.8;
};

qbm::fock::OracleCase random_case(std::mt19937_64& rng, const DrawEnvelope& env) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    qbm::fock::OracleCase c;
    c.central.omega_big = 1.0 + u(rng);
    const bool low = u(rng) < 0.5;
    const double ratio = low ? env.ratio_lo1 + (env.ratio_hi1 - env.ratio_lo1) * u(rng)
                             : env.ratio_lo2 + (env.ratio_hi2 - env.ratio_lo2) * u(rng);
    c.osc.omega = ratio * c.central.omega_big;
    c.osc.mass_m = 1.0;
    c.osc.coupling_g = 0.05 + 0.25 * u(rng);
    c.y = -1.0 + 2.0 * u(rng);
    c.y_prime = -1.0 + 2.0 * u(rng);
    c.phi = 0.5 * pi * u(rng);
    c.t = 0.5 + 2.5 * u(rng);
    c.bath.beta = 0.5 + 4.5 * u(rng);
    if (c.bath.beta * c.osc.omega < env.min_lambda) {
        c.bath.beta = env.min_lambda / c.osc.omega;
    }
    return c;
}

int run_oracle(std::uint64_t seed, int draws, int max_dim, const std::string& out_path) {
    const double tol_gamma = 1e-6, tol_overlap = 1e-5, tol_equiv = 1e-7;
    std::mt19937_64 rng(seed);
    DrawEnvelope env;

    std::optional<CsvWriter> csv;
    if (!out_path.empty()) {
        csv.emplace(out_path);
        csv->row({"draw", "dim", "gamma2_analytic", "d_gamma2", "d_overlap",
                  "construction_dist", "status"});
    }

    std::printf("%-5s %-4s %-14s %-12s %-12s %-12s %s\n", "draw", "dim", "gamma2",
                "|d gamma2|", "|d overlap|", "|dU| (cf/rk)", "status");

    bool all_pass = true;
    for (int d = 0; d < draws; ++d) {
        const auto c = random_case(rng, env);
        int dim;
        if (max_dim < 20) {
            dim = std::max(max_dim, 4); // deliberately under-resolved run
        } else {
            dim = std::min(qbm::fock::truncation_convergence(c, 2e-7), max_dim);
        }

        // analytic markers for the same single-oscillator ensemble
        qbm::Ensemble ens;
        ens.central = c.central;
        ens.oscillators.push_back(c.osc);
        ens.bath = c.bath;
        ens.trajectory = {c.y, c.y_prime, c.phi};
        const auto analytic = qbm::markers::marker_point(ens, c.t);

        const auto oracle = qbm::fock::oracle_markers(c, dim);
        const double dg = std::abs(analytic.gamma_sq_total - oracle.gamma_sq);
        const double db = std::abs(analytic.overlap_total - oracle.overlap);

        // independent-construction check on the retained block
        const int steps = qbm::fock::default_steps(c.osc, c.central, c.t);
        const auto u_rk = qbm::fock::propagate(c.osc, c.central, c.y, c.phi, c.t, dim, steps);
        const auto u_cf = qbm::fock::closed_form_unitary(c.osc, c.central, c.y, c.phi, c.t, dim);
        const auto ff = qbm::fock::floquet_factors(c.osc, c.central, c.y, c.phi, c.t);
        const double bmax = std::max(std::abs(ff.k_y_displacement),
                                     std::abs(ff.heisenberg_displacement));
        const int guard = qbm::fock::comparison_guard(dim, bmax);
        const double dist = qbm::fock::retained_block_distance(u_rk, u_cf, guard);

        const bool pass = dg < tol_gamma && db < tol_overlap && dist < tol_equiv;
        all_pass = all_pass && pass;
        std::printf("%-5d %-4d %-14.6g %-12.3g %-12.3g %-12.3g %s\n", d, dim,
                    analytic.gamma_sq_total, dg, db, dist, pass ? "PASS" : "FAIL");
        if (csv) {
            csv->row({std::to_string(d), std::to_string(dim), fmt17(analytic.gamma_sq_total),
                      fmt17(dg), fmt17(db), fmt17(dist), pass ? "PASS" : "FAIL"});
        }
    }
    std::printf("%s\n", all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 1;
}

// ----------------------------------------------------------------- figure

int run_figure(const std::string& id_str, const std::string& out_dir, bool svg,
               int grid, double t_max) {
    const auto id = qbm::scan::figure_id_from_string(id_str);
    qbm::scan::FigureOverrides ov;
    if (grid > 0) ov.n_points = grid;
    if (t_max > 0) ov.t_max = t_max;
    const auto fd = qbm::scan::figure_data(id, ov);

    std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    std::filesystem::create_directories(dir);
    const auto csv_path = (dir / (fd.id + ".csv")).string();
    write_figure_csv(fd, csv_path);
    std::cout << "wrote " << csv_path << " (" << fd.grid.size() << " rows)\n";
    if (svg) {
        const auto svg_path = (dir / (fd.id + ".svg")).string();
        write_figure_svg(fd, svg_path);
        std::cout << "wrote " << svg_path << "\n";
    }
    for (const auto& [k, v] : fd.metadata) std::cout << "# " << k << ": " << v << "\n";
    return 0;
}

// ------------------------------------------------------------------ phase

int run_phase(const std::string& config_path, const std::string& out_path,
              int phi_points, double t_max) {
    const LoadedConfig cfg = load_config(config_path);
    const auto& e = cfg.ensemble;
    const double omega_big = e.central.omega_big;

    for (std::size_t k = 0; k < e.oscillators.size(); ++k) {
        const auto pe = qbm::markers::phase_extremes(e.oscillators[k].omega, omega_big);
        std::cout << "k" << (k + 1);
        if (pe.degenerate) {
            std::cout << ": |v(0)|^2 is phi-independent (omega == Omega)\n";
        } else {
            std::cout << ": phi_at_max=" << fmt17(pe.phi_at_max)
                      << " phi_at_min=" << fmt17(pe.phi_at_min) << "\n";
        }
    }

    const int np = std::max(phi_points, 2);
    CsvWriter csv(out_path);
    std::vector<std::string> header = {"phi"};
    for (std::size_t k = 1; k <= e.oscillators.size(); ++k) {
        header.push_back("sup_etabar2_k" + std::to_string(k));
    }
    csv.row(header);

    // sup over t taken on the density-rule grid
    qbm::Ensemble probe = e;
    const int nt = qbm::scan::default_grid_points(probe, 0.0, t_max);
    for (int i = 0; i < np; ++i) {
        const double phi = 0.5 * pi * i / (np - 1);
        std::vector<std::string> cells = {fmt17(phi)};
        for (const auto& osc : e.oscillators) {
            double sup = 0.0;
            for (int j = 0; j < nt; ++j) {
                const double t = t_max * j / (nt - 1);
                sup = std::max(sup, std::norm(qbm::markers::eta_bar(omega_big, osc.omega, phi, t)));
            }
            cells.push_back(fmt17(sup));
        }
        csv.row(cells);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum Brownian motion objectivity markers"};
    app.require_subcommand(1);

    std::string config_path, out_path, figure_id, out_dir;
    int grid = 0, draws = 20, max_dim = 160, phi_points = 5;
    double t_max = 4.0 * pi;
    bool svg = false;
    std::uint64_t seed = 12345;

    auto* cmd_markers = app.add_subcommand("markers", "marker time series as CSV");
    cmd_markers->add_option("--config", config_path)->required();
    cmd_markers->add_option("--out", out_path);
    cmd_markers->add_option("--grid", grid);
    cmd_markers->add_option("--t-max", t_max);

    auto* cmd_fraction = app.add_subcommand("fraction", "frequency-relation report");
    cmd_fraction->add_option("--config", config_path)->required();
    cmd_fraction->add_option("--out", out_path);

    auto* cmd_oracle = app.add_subcommand("oracle", "Fock-space validation suite");
    cmd_oracle->add_option("--seed", seed);
    cmd_oracle->add_option("--draws", draws);
    cmd_oracle->add_option("--max-dim", max_dim);
    cmd_oracle->add_option("--out", out_path);

    auto* cmd_figure = app.add_subcommand("figure", "stock figure dataset");
    cmd_figure->add_option("id", figure_id)->required();
    cmd_figure->add_option("--out", out_dir);
    cmd_figure->add_flag("--svg", svg);
    cmd_figure->add_option("--grid", grid);
    double fig_t_max = 0.0;
    cmd_figure->add_option("--t-max", fig_t_max);

    auto* cmd_phase = app.add_subcommand("phase", "phase sweep report");
    cmd_phase->add_option("--config", config_path)->required();
    cmd_phase->add_option("--out", out_path);
    cmd_phase->add_option("--grid", phi_points);
    double phase_t_max = 50.0;
    cmd_phase->add_option("--t-max", phase_t_max);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (cmd_markers->parsed()) return run_markers(config_path, out_path, grid, t_max);
        if (cmd_fraction->parsed()) return run_fraction(config_path, out_path);
        if (cmd_oracle->parsed()) return run_oracle(seed, draws, max_dim, out_path);
        if (cmd_figure->parsed()) return run_figure(figure_id, out_dir, svg, grid, fig_t_max);
        if (cmd_phase->parsed()) return run_phase(config_path, out_path, phi_points, phase_t_max);
    } catch (const qbm::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        switch (err.code()) {
            case qbm::Error::Code::config_error:
            case qbm::Error::Code::unknown_figure:
            case qbm::Error::Code::non_positive_parameter:
            case qbm::Error::Code::empty_environment:
            case qbm::Error::Code::phi_out_of_range:
            case qbm::Error::Code::invalid_range:
                return 2; // bad configuration or usage
            case qbm::Error::Code::not_converged_at_max_dim:
                return 3;
            default:
                return 1; // numerical failure
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
