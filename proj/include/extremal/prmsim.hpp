#pragma once

// Finite realizations of the Poisson random measure N on [0, T] x (x_l, x_r)
// with mean measure dt x Pi(dx), and the continuous-time extremal process
// Y^(r)(t) = rth largest mark among points with t_k <= t.
//
// Only points above a truncation level are simulated. Lower strips and
// later time windows are added from independent child streams, which is
// valid because a PRM restricted to disjoint sets gives independent PRMs.

#include "extremal/intensity.hpp"
#include "extremal/records.hpp"
#include "extremal/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace extremal {

struct FieldPoint {
    double t;
    double j;
};

class PoissonField {
public:
    PoissonField(IntensityModel model, double window, double level, RngStream stream);

    /// A field with given points (all inside the window and above the
    /// level). Later strips and extensions draw from `stream`.
    static PoissonField from_points(IntensityModel model, double window, double level,
                                    std::vector<FieldPoint> points, RngStream stream);

    const IntensityModel& model() const noexcept { return model_; }
    double window() const noexcept { return window_; }
    double level() const noexcept { return level_; }
    /// Sorted by time.
    std::span<const FieldPoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    std::uint64_t stream_key() const noexcept { return stream_.key(); }
    std::size_t strips() const noexcept { return strips_; }
    std::size_t extensions() const noexcept { return extensions_; }

    /// Marks in time order.
    std::vector<double> marks() const;

    /// Adds [0, T] x (new_level, level] from strip stream k = strips() + 1.
    void lower_level(double new_level);
    /// Adds (T, new_window] x (level, x_r) from extension stream k = extensions() + 1.
    void extend_window(double new_window);

private:
    struct NoBlock {};
    PoissonField(IntensityModel model, double window, double level, RngStream stream, NoBlock);
    void add_block(RngStream s, double t0, double t1, double hi_level, double lo_level);

    IntensityModel model_;
    double window_;
    double level_;
    RngStream stream_;
    std::vector<FieldPoint> points_;
    std::size_t strips_ = 0;
    std::size_t extensions_ = 0;
};

/// K ~ Poisson(T Q(level)); times iid U[0, T]; marks Q^<-(Q(level) U').
/// Throws DomainError unless level is inside (x_l, x_r) and T > 0.
PoissonField simulate_field(const IntensityModel& model, double window, double level,
                            const RngStream& rng);

/// Level with Q(level) = (r + 10 sqrt(r) + 50) / t_min, so that at least r
/// points arrive by t_min except with negligible probability.
double truncation_level_for(const IntensityModel& model, std::size_t r, double t_min);

/// simulate_field at truncation_level_for(model, r, t_min).
PoissonField simulate_for_order(const IntensityModel& model, std::size_t r, double window,
                                double t_min, const RngStream& rng);

struct PathOnGrid {
    std::vector<double> t;
    std::vector<double> values;
};

/// Y^(r) on an increasing grid. Throws InsufficientTruncation when fewer
/// than r simulated points have t_k <= t for some grid time.
PathOnGrid yr_path(const PoissonField& field, std::size_t r, std::span<const double> t_grid);

/// Like yr_path, but on InsufficientTruncation lowers the level so that
/// Q doubles and retries, up to `max_strips` times.
PathOnGrid yr_path_extending(PoissonField& field, std::size_t r, std::span<const double> t_grid,
                             std::size_t max_strips = 64);

/// Exact jump skeleton: the time the rth point arrives and every later time
/// at which the rth largest mark changes, with the value after the change.
PathOnGrid yr_skeleton(const PoissonField& field, std::size_t r);

/// N([0, t] x (x, x_r)). Throws DomainError for x below the level, where
/// the simulated field under-counts.
std::size_t count_above(const PoissonField& field, double t, double x);

/// Union of the p-records of the field for p = 1..r. Values up to the
/// horizon Y^(r)(T) are complete: no later point can add a record there.
RangeSet range_of_yr(const PoissonField& field, std::size_t r);

/// p-records of the field; `times` are 1-based indices into points().
RecordProcess p_records_field(const PoissonField& field, std::size_t p);

/// S+(x) = S(anchor + x) - S(anchor) and S-(x) = S(anchor) - S(anchor - x)
/// for x >= 0; the default anchor 0 gives the usual split at the origin.
struct SSplit {
    double plus;
    double minus;
};
double s_plus(const IntensityModel& model, double x, double anchor = 0.0);
double s_minus(const IntensityModel& model, double x, double anchor = 0.0);
/// Both halves; throws DomainError if either argument leaves its domain.
SSplit s_split(const IntensityModel& model, double x, double anchor = 0.0);
/// H-bar(x) = exp(-S(x)) for each half.
double h_bar_plus(const IntensityModel& model, double x, double anchor = 0.0);
double h_bar_minus(const IntensityModel& model, double x, double anchor = 0.0);

} // namespace extremal
