#ifndef QBM_SCAN_HPP
#define QBM_SCAN_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbm/markers.hpp"
#include "qbm/model.hpp"

namespace qbm::scan {

struct MarkerSeries {
    Ensemble ensemble; // kept so recurrence refinement can re-evaluate analytically
    std::vector<double> grid;
    std::vector<markers::MarkerPoint> points;
};

// Uniform grid evaluation of both markers on [t_lo, t_hi].  threads = 0
// uses hardware concurrency; points are assembled in grid order regardless
// of the partition.
MarkerSeries marker_series(const Ensemble& ens, double t_lo, double t_hi,
                           int n_points, unsigned threads = 1);

// >= 40 grid points per fastest oscillation 2*pi/max(Omega, omega_k, Omega+omega_k).
int default_grid_points(const Ensemble& ens, double t_lo, double t_hi);

struct RecurrenceReport {
    double threshold = 1.0;
    std::vector<double> hit_times;  // refined local-max locations, >= threshold
    std::vector<double> hit_values;
    double max_in_window = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool degenerate_flat = false; // marker identically 1 (Y == Y'): every point hits
};

// Local maxima of the total decoherence factor at or above `threshold`,
// refined between neighboring grid points by golden-section search on the
// analytic marker, so hits are not limited by grid resolution.
RecurrenceReport detect_recurrences(const MarkerSeries& series, double threshold);

struct EnvelopeCheck {
    double measured_period;
    double predicted_period; // 2*pi/|Omega - omega|
    double relative_mismatch;
    int recurrences_found;
};

// Spacing of near-1 recurrences of the single-oscillator marker versus the
// beating prediction.  Unit coupling/mass, beta = 1, delta Y = 1.
EnvelopeCheck envelope_check(double omega, double omega_big, double phi,
                             double t_hi);

enum class FigureId { fig1, fig2, fig3a, fig3b, fig4, fig5, fig6, fig6b, fig7, fig8 };

FigureId figure_id_from_string(std::string_view name); // throws unknown_figure
std::string to_string(FigureId id);

struct FigureOverrides {
    std::optional<double> t_max;
    std::optional<int> n_points;
    std::optional<double> beta;
    std::optional<double> coupling;
    std::optional<double> phi;
    std::optional<double> y;
    std::optional<double> y_prime;
};

// Column-oriented dataset reproducing one of the stock figures.  Marker
// figures carry the cmd-markers column set; the phase-sweep figures carry
// one |eta_bar|^2 column per phi value.
struct FigureData {
    std::string id;
    std::vector<double> grid;
    std::vector<std::string> columns;         // names, excluding the leading t
    std::vector<std::vector<double>> values;  // values[c][i], aligned with grid
    std::map<std::string, std::string> metadata;
};

FigureData figure_data(FigureId id, const FigureOverrides& overrides = {});

} // namespace qbm::scan

#endif
