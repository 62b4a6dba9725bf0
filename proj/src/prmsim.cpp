#include "extremal/prmsim.hpp"

#include "extremal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

namespace extremal {

namespace {

// child-stream namespaces under the field's base stream
constexpr std::uint64_t kInitialBlock = 0;
constexpr std::uint64_t kStripBlock = 1;
constexpr std::uint64_t kWindowBlock = 2;

void require_level(const IntensityModel& m, double level) {
    if (!m.in_domain(level) || !std::isfinite(m.q(level))) {
        std::ostringstream msg;
        msg << "truncation level " << level << " outside (" << m.x_lower() << ", " << m.x_upper()
            << ") or Q(level) not finite for " << m.name();
        throw DomainError(msg.str());
    }
}

using MinHeap = std::priority_queue<double, std::vector<double>, std::greater<>>;

void push_top(MinHeap& top, std::size_t r, double v) {
    if (top.size() < r) {
        top.push(v);
    } else if (v > top.top()) {
        top.pop();
        top.push(v);
    }
}

} // namespace

PoissonField::PoissonField(IntensityModel model, double window, double level, RngStream stream,
                           NoBlock)
    : model_(std::move(model)), window_(window), level_(level), stream_(std::move(stream)) {
    if (!(window > 0.0) || !std::isfinite(window)) {
        throw DomainError("field window must be finite and positive");
    }
    require_level(model_, level);
}

PoissonField::PoissonField(IntensityModel model, double window, double level, RngStream stream)
    : PoissonField(std::move(model), window, level, std::move(stream), NoBlock{}) {
    add_block(stream_.child(kInitialBlock), 0.0, window_, model_.x_upper(), level_);
}

PoissonField PoissonField::from_points(IntensityModel model, double window, double level,
                                       std::vector<FieldPoint> points, RngStream stream) {
    PoissonField f(std::move(model), window, level, std::move(stream), NoBlock{});
    for (const auto& p : points) {
        if (!(p.t >= 0.0 && p.t <= window) || !(p.j > level) || !f.model_.in_domain(p.j)) {
            std::ostringstream msg;
            msg << "point (" << p.t << ", " << p.j << ") outside [0, " << window << "] x ("
                << level << ", " << f.model_.x_upper() << ")";
            throw DomainError(msg.str());
        }
    }
    f.points_ = std::move(points);
    std::sort(f.points_.begin(), f.points_.end(),
              [](const FieldPoint& a, const FieldPoint& b) { return a.t < b.t; });
    return f;
}

std::vector<double> PoissonField::marks() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.j);
    return out;
}

void PoissonField::add_block(RngStream s, double t0, double t1, double hi_level, double lo_level) {
    const double q_hi = model_.q(hi_level);
    const double mass = model_.q(lo_level) - q_hi;
    const std::uint64_t k = s.poisson((t1 - t0) * mass);
    points_.reserve(points_.size() + k);
    for (std::uint64_t i = 0; i < k; ++i) {
        const double t = t0 + (t1 - t0) * s.uniform();
        double j = model_.q_inverse(q_hi + mass * s.uniform());
        // rounding can land exactly on the lower edge; redraw keeps the law
        while (!(j > lo_level)) j = model_.q_inverse(q_hi + mass * s.uniform());
        points_.push_back({t, j});
    }
    std::sort(points_.begin(), points_.end(),
              [](const FieldPoint& a, const FieldPoint& b) { return a.t < b.t; });
}

void PoissonField::lower_level(double new_level) {
    require_level(model_, new_level);
    if (!(new_level < level_)) {
        throw DomainError("new truncation level must lie below the current level");
    }
    ++strips_;
    add_block(stream_.child(kStripBlock).child(strips_), 0.0, window_, level_, new_level);
    level_ = new_level;
}

void PoissonField::extend_window(double new_window) {
    if (!(new_window > window_) || !std::isfinite(new_window)) {
        throw DomainError("new window must be finite and exceed the current window");
    }
    ++extensions_;
    add_block(stream_.child(kWindowBlock).child(extensions_), window_, new_window,
              model_.x_upper(), level_);
    window_ = new_window;
}

PoissonField simulate_field(const IntensityModel& model, double window, double level,
                            const RngStream& rng) {
    return PoissonField(model, window, level, rng);
}

double truncation_level_for(const IntensityModel& model, std::size_t r, double t_min) {
    if (!(t_min > 0.0)) throw DomainError("t_min must be positive");
    const double rr = static_cast<double>(r);
    return model.q_inverse((rr + 10.0 * std::sqrt(rr) + 50.0) / t_min);
}

PoissonField simulate_for_order(const IntensityModel& model, std::size_t r, double window,
                                double t_min, const RngStream& rng) {
    return PoissonField(model, window, truncation_level_for(model, r, t_min), rng);
}

PathOnGrid yr_path(const PoissonField& field, std::size_t r, std::span<const double> t_grid) {
    if (r < 1) throw DomainError("yr_path needs r >= 1");
    if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
        throw DomainError("time grid must be increasing");
    }
    if (!t_grid.empty() && (t_grid.front() < 0.0 || t_grid.back() > field.window())) {
        throw DomainError("time grid leaves the simulated window [0, " +
                          std::to_string(field.window()) + "]");
    }
    PathOnGrid out;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.values.reserve(t_grid.size());
    MinHeap top;
    const auto pts = field.points();
    std::size_t k = 0, seen = 0;
    for (double t : t_grid) {
        for (; k < pts.size() && pts[k].t <= t; ++k, ++seen) push_top(top, r, pts[k].j);
        if (top.size() < r) throw InsufficientTruncation(t, seen, r);
        out.values.push_back(top.top());
    }
    return out;
}

PathOnGrid yr_path_extending(PoissonField& field, std::size_t r, std::span<const double> t_grid,
                             std::size_t max_strips) {
    for (std::size_t attempt = 0;; ++attempt) {
        try {
            return yr_path(field, r, t_grid);
        } catch (const InsufficientTruncation&) {
            if (attempt >= max_strips) throw;
            field.lower_level(field.model().q_inverse(2.0 * field.model().q(field.level())));
        }
    }
}

PathOnGrid yr_skeleton(const PoissonField& field, std::size_t r) {
    if (r < 1) throw DomainError("yr_skeleton needs r >= 1");
    PathOnGrid out;
    MinHeap top;
    for (const auto& p : field.points()) {
        const bool full_before = top.size() == r;
        const double before = full_before ? top.top() : 0.0;
        push_top(top, r, p.j);
        if (top.size() == r && (!full_before || top.top() != before)) {
            out.t.push_back(p.t);
            out.values.push_back(top.top());
        }
    }
    return out;
}

std::size_t count_above(const PoissonField& field, double t, double x) {
    if (x < field.level()) {
        std::ostringstream msg;
        msg << "count above x=" << x << " is below the truncation level " << field.level();
        throw DomainError(msg.str());
    }
    std::size_t n = 0;
    for (const auto& p : field.points()) {
        if (p.t > t) break;
        n += p.j > x;
    }
    return n;
}

RangeSet range_of_yr(const PoissonField& field, std::size_t r) {
    return range_of_Mr(field.marks(), r);
}

RecordProcess p_records_field(const PoissonField& field, std::size_t p) {
    return p_records(field.marks(), p);
}

namespace {

void require_half(const IntensityModel& m, double x, double anchor, double at) {
    if (!m.in_domain(anchor)) {
        std::ostringstream msg;
        msg << "anchor " << anchor << " outside (" << m.x_lower() << ", " << m.x_upper()
            << "); choose an anchor inside the domain";
        throw DomainError(msg.str());
    }
    if (!(x >= 0.0) || !m.in_domain(at)) {
        std::ostringstream msg;
        msg << "split argument " << x << " leaves the domain around anchor " << anchor;
        throw DomainError(msg.str());
    }
}

} // namespace

double s_plus(const IntensityModel& model, double x, double anchor) {
    require_half(model, x, anchor, anchor + x);
    return model.s(anchor + x) - model.s(anchor);
}

double s_minus(const IntensityModel& model, double x, double anchor) {
    require_half(model, x, anchor, anchor - x);
    return model.s(anchor) - model.s(anchor - x);
}

SSplit s_split(const IntensityModel& model, double x, double anchor) {
    return {s_plus(model, x, anchor), s_minus(model, x, anchor)};
}

double h_bar_plus(const IntensityModel& model, double x, double anchor) {
    return std::exp(-s_plus(model, x, anchor));
}

double h_bar_minus(const IntensityModel& model, double x, double anchor) {
    return std::exp(-s_minus(model, x, anchor));
}

} // namespace extremal
