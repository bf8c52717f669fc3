#include "qbm/scan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

namespace qbm::scan {

namespace {

constexpr double pi = std::numbers::pi;

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_chunks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& work) {
    threads = static_cast<unsigned>(
        std::min<std::size_t>(resolve_threads(threads), n == 0 ? 1 : n));
    if (threads <= 1) {
        work(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
        const std::size_t lo = k * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
}

double total_gamma(const Ensemble& ens, double t) {
    return markers::marker_point(ens, t).gamma_sq_total;
}

// golden-section maximization of f on [lo, hi]
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int iter = 0; iter < 80 && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++iter) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

Ensemble single_oscillator_ensemble(double omega, double omega_big, double phi) {
    Ensemble e;
    e.central.omega_big = omega_big;
    e.oscillators.push_back({1.0, omega, 1.0});
    e.bath.beta = 1.0;
    e.trajectory = {1.0, 0.0, phi};
    return e;
}

} // namespace

int default_grid_points(const Ensemble& ens, double t_lo, double t_hi) {
    double fastest = ens.central.omega_big;
    for (const auto& o : ens.oscillators) {
        fastest = std::max({fastest, o.omega, ens.central.omega_big + o.omega});
    }
    const double periods = (t_hi - t_lo) * fastest / (2.0 * pi);
    const double n = 40.0 * periods;
    return std::clamp(static_cast<int>(std::ceil(n)) + 1, 2, 1000000);
}

MarkerSeries marker_series(const Ensemble& ens, double t_lo, double t_hi,
                           int n_points, unsigned threads) {
    if (!(t_lo >= 0.0) || !(t_hi > t_lo) || n_points < 2) {
        throw Error(Error::Code::invalid_range,
                    "need 0 <= t_lo < t_hi and n_points >= 2");
    }
    validate(ens);

    MarkerSeries s;
    s.ensemble = ens;
    s.grid.resize(n_points);
    s.points.resize(n_points);
    const double dt = (t_hi - t_lo) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) s.grid[i] = t_lo + i * dt;
    s.grid.back() = t_hi;

    parallel_chunks(static_cast<std::size_t>(n_points), threads,
                    [&](std::size_t lo, std::size_t hi) {
                        for (std::size_t i = lo; i < hi; ++i) {
                            s.points[i] = markers::marker_point(ens, s.grid[i]);
                        }
                    });
    return s;
}

RecurrenceReport detect_recurrences(const MarkerSeries& series, double threshold) {
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw Error(Error::Code::invalid_range, "threshold must lie in (0, 1]");
    }
    const std::size_t n = series.grid.size();
    RecurrenceReport rep;
    rep.threshold = threshold;
    rep.window_lo = series.grid.front();
    rep.window_hi = series.grid.back();

    std::vector<double> total(n);
    for (std::size_t i = 0; i < n; ++i) total[i] = series.points[i].gamma_sq_total;
    rep.max_in_window = *std::max_element(total.begin(), total.end());

    const double spread = rep.max_in_window - *std::min_element(total.begin(), total.end());
    if (spread < 1e-15) {
        rep.degenerate_flat = true;
        rep.hit_times = series.grid;
        rep.hit_values = total;
        return rep;
    }

    auto f = [&](double t) { return total_gamma(series.ensemble, t); };

    auto add_hit = [&](double lo, double hi) {
        const double t_star = golden_max(f, lo, hi);
        const double v = f(t_star);
        if (v >= threshold) {
            if (!rep.hit_times.empty() &&
                std::abs(rep.hit_times.back() - t_star) < 1e-9 * std::max(1.0, t_star)) {
                return; // duplicate of the previous refinement
            }
            rep.hit_times.push_back(t_star);
            rep.hit_values.push_back(v);
            rep.max_in_window = std::max(rep.max_in_window, v);
        }
    };

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (total[i] >= total[i - 1] && total[i] >= total[i + 1]) {
            add_hit(series.grid[i - 1], series.grid[i + 1]);
        }
    }
    // endpoints can hide a maximum between the last interior point and the edge
    if (n >= 2 && total[0] > total[1] && total[0] >= threshold) {
        rep.hit_times.insert(rep.hit_times.begin(), series.grid[0]);
        rep.hit_values.insert(rep.hit_values.begin(), total[0]);
    }
    if (n >= 2 && total[n - 1] > total[n - 2]) {
        add_hit(series.grid[n - 2], series.grid[n - 1]);
    }
    return rep;
}

EnvelopeCheck envelope_check(double omega, double omega_big, double phi,
                             double t_hi) {
    const auto env = markers::beating_envelope(omega, omega_big, phi);
    if (env.degenerate) {
        throw Error(Error::Code::invalid_range,
                    "zero detuning: beating period undefined");
    }
    EnvelopeCheck chk;
    chk.predicted_period = 2.0 * pi / env.delta_omega;

    const Ensemble ens = single_oscillator_ensemble(omega, omega_big, phi);
    const int n = default_grid_points(ens, 0.0, t_hi);
    const MarkerSeries series = marker_series(ens, 0.0, t_hi, n);
    const RecurrenceReport rep = detect_recurrences(series, 0.999);

    chk.recurrences_found = static_cast<int>(rep.hit_times.size());
    if (rep.hit_times.size() < 2) {
        chk.measured_period = 0.0;
        chk.relative_mismatch = 1.0;
        return chk;
    }
    double spacing_sum = 0.0;
    for (std::size_t i = 1; i < rep.hit_times.size(); ++i) {
        spacing_sum += rep.hit_times[i] - rep.hit_times[i - 1];
    }
    chk.measured_period = spacing_sum / (rep.hit_times.size() - 1);
    chk.relative_mismatch =
        std::abs(chk.measured_period - chk.predicted_period) / chk.predicted_period;
    return chk;
}

FigureId figure_id_from_string(std::string_view name) {
    if (name == "fig1") return FigureId::fig1;
    if (name == "fig2") return FigureId::fig2;
    if (name == "fig3a") return FigureId::fig3a;
    if (name == "fig3b") return FigureId::fig3b;
    if (name == "fig4") return FigureId::fig4;
    if (name == "fig5") return FigureId::fig5;
    if (name == "fig6") return FigureId::fig6;
    if (name == "fig6b") return FigureId::fig6b;
    if (name == "fig7") return FigureId::fig7;
    if (name == "fig8") return FigureId::fig8;
    throw Error(Error::Code::unknown_figure, "unknown figure id: " + std::string(name));
}

std::string to_string(FigureId id) {
    switch (id) {
        case FigureId::fig1: return "fig1";
        case FigureId::fig2: return "fig2";
        case FigureId::fig3a: return "fig3a";
        case FigureId::fig3b: return "fig3b";
        case FigureId::fig4: return "fig4";
        case FigureId::fig5: return "fig5";
        case FigureId::fig6: return "fig6";
        case FigureId::fig6b: return "fig6b";
        case FigureId::fig7: return "fig7";
        case FigureId::fig8: return "fig8";
    }
    return "?";
}

namespace {

FigureData from_marker_series(const std::string& id, const Ensemble& ens,
                              double t_lo, double t_hi,
                              const FigureOverrides& ov) {
    Ensemble e = ens;
    if (ov.beta) e.bath.beta = *ov.beta;
    if (ov.coupling) {
        for (auto& o : e.oscillators) o.coupling_g = *ov.coupling;
    }
    if (ov.phi) e.trajectory.phi = *ov.phi;
    if (ov.y) e.trajectory.y = *ov.y;
    if (ov.y_prime) e.trajectory.y_prime = *ov.y_prime;
    if (ov.t_max) t_hi = *ov.t_max;

    const int n = ov.n_points ? *ov.n_points : default_grid_points(e, t_lo, t_hi);
    const MarkerSeries s = marker_series(e, t_lo, t_hi, n, 0);

    FigureData fd;
    fd.id = id;
    fd.grid = s.grid;
    const std::size_t nk = e.oscillators.size();
    for (std::size_t k = 0; k < nk; ++k) fd.columns.push_back("gamma2_k" + std::to_string(k + 1));
    for (std::size_t k = 0; k < nk; ++k) fd.columns.push_back("overlap_k" + std::to_string(k + 1));
    fd.columns.push_back("gamma2_total");
    fd.columns.push_back("overlap_total");
    fd.values.assign(fd.columns.size(), std::vector<double>(s.grid.size()));
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const auto& p = s.points[i];
        for (std::size_t k = 0; k < nk; ++k) fd.values[k][i] = p.gamma_sq_per_osc[k];
        for (std::size_t k = 0; k < nk; ++k) fd.values[nk + k][i] = p.overlap_per_osc[k];
        fd.values[2 * nk][i] = p.gamma_sq_total;
        fd.values[2 * nk + 1][i] = p.overlap_total;
    }
    fd.metadata["omega_big"] = std::to_string(e.central.omega_big);
    fd.metadata["beta"] = std::to_string(e.bath.beta);
    fd.metadata["n_oscillators"] = std::to_string(nk);
    fd.metadata["window"] = "[" + std::to_string(t_lo) + ", " + std::to_string(t_hi) + "]";
    return fd;
}

FigureData phase_sweep_figure(const std::string& id, double omega_big,
                              double omega, double t_hi, const FigureOverrides& ov) {
    if (ov.t_max) t_hi = *ov.t_max;
    const Ensemble probe = single_oscillator_ensemble(omega, omega_big, 0.0);
    const int n = ov.n_points ? *ov.n_points : default_grid_points(probe, 0.0, t_hi);

    const std::vector<double> phis = {0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2};
    FigureData fd;
    fd.id = id;
    fd.grid.resize(n);
    const double dt = t_hi / (n - 1);
    for (int i = 0; i < n; ++i) fd.grid[i] = i * dt;

    for (std::size_t c = 0; c < phis.size(); ++c) {
        fd.columns.push_back("etabar2_phi" + std::to_string(c + 1));
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) {
            col[i] = std::norm(markers::eta_bar(omega_big, omega, phis[c], fd.grid[i]));
        }
        fd.values.push_back(std::move(col));
        fd.metadata["phi" + std::to_string(c + 1)] = std::to_string(phis[c]);
    }
    fd.metadata["omega_big"] = std::to_string(omega_big);
    fd.metadata["omega"] = std::to_string(omega);
    return fd;
}

Ensemble collective_sqrt_ensemble() {
    Ensemble e;
    e.central.omega_big = 7.0;
    for (int k = 1; k <= 5; ++k) {
        e.oscillators.push_back({1.0, std::sqrt(25.0 + 0.01 * k), 1.0});
    }
    e.bath.beta = 1.0;
    e.trajectory = {1.0, 0.0, 0.0};
    return e;
}

} // namespace

FigureData figure_data(FigureId id, const FigureOverrides& ov) {
    switch (id) {
        case FigureId::fig1:
            // beating profile at small detuning; three envelope periods
            return from_marker_series("fig1", single_oscillator_ensemble(3.9, 4.0, 0.0),
                                      0.0, 3.0 * 2.0 * pi / 0.1, ov);
        case FigureId::fig2:
            return from_marker_series("fig2", single_oscillator_ensemble(5.0, 7.0, 0.0),
                                      0.0, 4.0 * pi, ov);
        case FigureId::fig3a:
            return from_marker_series("fig3a", single_oscillator_ensemble(2.0, 3.0, 0.0),
                                      0.0, 8.0 * pi, ov);
        case FigureId::fig3b:
            return from_marker_series("fig3b", single_oscillator_ensemble(4.0, 6.0, 0.0),
                                      0.0, 8.0 * pi, ov);
        case FigureId::fig4: {
            Ensemble e;
            e.central.omega_big = 7.0;
            for (int w = 2; w <= 6; ++w) e.oscillators.push_back({1.0, double(w), 1.0});
            e.bath.beta = 1.0;
            e.trajectory = {1.0, 0.0, 0.0};
            return from_marker_series("fig4", e, 0.0, 4.0 * pi, ov);
        }
        case FigureId::fig5: {
            // near-5:7 irrational pair; the source caption's ratio text reads
            // omega:Omega = sqrt(50):sqrt(26) while calling it close to 5:7,
            // which is the inverse ordering.  We take omega = sqrt(26),
            // Omega = sqrt(50) (ratio ~ 0.7211, close to 5/7) and note it.
            FigureData fd = from_marker_series(
                "fig5", single_oscillator_ensemble(std::sqrt(26.0), std::sqrt(50.0), 0.0),
                0.0, 50.0, ov);
            fd.metadata["note"] =
                "caption ratio text and its stated closeness to 5:7 conflict; "
                "dataset uses omega=sqrt(26), Omega=sqrt(50)";
            return fd;
        }
        case FigureId::fig6:
            return phase_sweep_figure("fig6", std::sqrt(5.0), std::sqrt(3.0), 50.0, ov);
        case FigureId::fig7:
            return phase_sweep_figure("fig7", std::sqrt(3.0), std::sqrt(5.0), 50.0, ov);
        case FigureId::fig6b:
            return from_marker_series("fig6b", collective_sqrt_ensemble(), 0.0, 500.0, ov);
        case FigureId::fig8:
            return from_marker_series("fig8", collective_sqrt_ensemble(), 0.0, 10000.0, ov);
    }
    throw Error(Error::Code::unknown_figure, "unknown figure id");
}

} // namespace qbm::scan
