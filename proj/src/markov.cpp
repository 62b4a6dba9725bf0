#include "extremal/markov.hpp"

#include "extremal/errors.hpp"
#include "extremal/seqcore.hpp"

#include <algorithm>
#include <string>

namespace extremal {

double conditional_quantile(const DistributionModel& f, double u, const AugmentedValue& m) {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("conditional quantile level " + std::to_string(u) + " outside (0, 1)");
    }
    if (m.is_bottom()) return 0.0;
    const double mv = m.value();
    if (!(f.cdf(mv) > 0.0)) return mv > 0.0 ? 1.0 : 0.0;
    return f.conditional_quantile(u, mv);
}

DescendingTuple::DescendingTuple(std::vector<AugmentedValue> entries) : m_(std::move(entries)) {
    if (m_.empty()) throw DomainError("descending tuple needs at least one component");
    for (std::size_t i = 1; i < m_.size(); ++i) {
        if (m_[i - 1] < m_[i]) {
            throw DomainError("tuple is not nonincreasing at component " + std::to_string(i + 1));
        }
    }
}

DescendingTuple DescendingTuple::bottoms(std::size_t r) {
    if (r == 0) throw DomainError("descending tuple needs at least one component");
    return DescendingTuple(std::vector<AugmentedValue>(r), true);
}

const AugmentedValue& DescendingTuple::component(std::size_t k) const {
    if (k == 0 || k > m_.size()) {
        throw DomainError("component " + std::to_string(k) + " outside 1.." +
                          std::to_string(m_.size()));
    }
    return m_[k - 1];
}

DescendingTuple truncation_map(const DescendingTuple& m, const AugmentedValue& x) {
    std::vector<AugmentedValue> out(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (x <= m[k]) {
            out[k] = m[k];
        } else if (k == 0 || x <= m[k - 1]) {
            out[k] = x;
        } else {
            out[k] = m[k - 1];
        }
    }
    return DescendingTuple(std::move(out), true);
}

AugmentedValue mu_hat_zero(const DistributionModel& f, const DescendingTuple& m,
                           const AugmentedValue& x, double u) {
    if (x <= m.last()) return conditional_quantile(f, u, m.last());
    return x;
}

namespace {

void require_uniform_row(std::span<const double> u, std::size_t n) {
    if (u.size() < n) {
        throw DomainError("uniform row of length " + std::to_string(u.size()) +
                          " is shorter than the sequence length " + std::to_string(n));
    }
}

} // namespace

AugmentedSequence build_hat_sequence(const DistributionModel& f, std::span<const double> x,
                                     std::span<const double> u, std::size_t r) {
    if (r < 1) throw DomainError("build_hat_sequence needs r >= 1");
    require_uniform_row(u, x.size());
    std::vector<AugmentedValue> out;
    out.reserve(x.size());
    auto tuple = DescendingTuple::bottoms(r);
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.push_back(i == 0 ? AugmentedValue(x[0]) : mu_hat_zero(f, tuple, x[i], u[i]));
        tuple = truncation_map(tuple, x[i]);
    }
    return AugmentedSequence(std::move(out));
}

AugmentedSequence build_tilde_sequence(const DistributionModel& f, const AugmentedSequence& x_r,
                                       std::span<const double> u, std::size_t r) {
    if (r < 1) throw DomainError("build_tilde_sequence needs r >= 1");
    require_uniform_row(u, x_r.size());
    if (!x_r.is_nondecreasing()) throw DomainError("order-r sequence is not nondecreasing");
    const std::size_t lead = std::min(x_r.size(), r - 1);
    if (x_r.leading_bottoms() != lead) {
        throw DomainError("order-" + std::to_string(r) + " sequence must start with " +
                          std::to_string(lead) + " bottoms, found " +
                          std::to_string(x_r.leading_bottoms()));
    }
    std::vector<AugmentedValue> out(x_r.size());
    for (std::size_t i = r; i < x_r.size(); ++i) {
        const AugmentedValue& prev = x_r[i - 1];
        const AugmentedValue& cur = x_r[i];
        out[i] = prev < cur ? prev : AugmentedValue(conditional_quantile(f, u[i], cur));
    }
    return AugmentedSequence(std::move(out));
}

AugmentedSequence kernel_step(const DistributionModel& f, const AugmentedSequence& x_r,
                              std::span<const double> u, std::size_t r) {
    return cummax(build_tilde_sequence(f, x_r, u, r));
}

std::vector<double> UniformArray::row(std::size_t r) const {
    RngStream s = base_.child(r);
    std::vector<double> out(n_max_);
    for (auto& v : out) v = s.uniform();
    return out;
}

} // namespace extremal
