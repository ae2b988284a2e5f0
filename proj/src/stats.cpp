#include "sinkpop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/chi_squared.hpp>

#include "sinkpop/errors.hpp"

namespace sinkpop {

namespace {

double chi_square_quantile(int dof, double alpha) {
    boost::math::chi_squared dist(dof);
    return boost::math::quantile(dist, 1.0 - alpha);
}

ChiSquareResult finish(double statistic, int dof, double alpha) {
    ChiSquareResult r;
    r.statistic = statistic;
    r.dof = dof;
    r.alpha = alpha;
    if (dof <= 0) {
        r.pass = true; // nothing to test
        r.critical = 0.0;
    } else {
        r.critical = chi_square_quantile(dof, alpha);
        r.pass = statistic <= r.critical;
    }
    return r;
}

} // namespace

ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts,
                                   double alpha) {
    if (counts.empty())
        throw Error(ErrorCode::TooFewSamples, "chi-square: no categories");
    const std::uint64_t total =
        std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    const double expected =
        static_cast<double>(total) / static_cast<double>(counts.size());
    if (counts.size() > 1 && expected < 5.0)
        throw Error(ErrorCode::TooFewSamples,
                    "chi-square: expected count per category below 5");
    double stat = 0.0;
    for (std::uint64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return finish(stat, static_cast<int>(counts.size()) - 1, alpha);
}

ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b,
                                      double alpha) {
    const std::size_t k = std::max(a.size(), b.size());
    if (k == 0)
        throw Error(ErrorCode::TooFewSamples, "chi-square: no categories");
    auto at = [](std::span<const std::uint64_t> v, std::size_t i) {
        return i < v.size() ? v[i] : std::uint64_t{0};
    };
    const double na = std::accumulate(a.begin(), a.end(), 0.0);
    const double nb = std::accumulate(b.begin(), b.end(), 0.0);
    if (na == 0 || nb == 0)
        throw Error(ErrorCode::TooFewSamples, "chi-square: empty sample");

    // merge adjacent categories until every expected cell reaches 5
    std::vector<std::pair<double, double>> merged;
    double ca = 0, cb = 0;
    for (std::size_t i = 0; i < k; ++i) {
        ca += static_cast<double>(at(a, i));
        cb += static_cast<double>(at(b, i));
        const double pooled = (ca + cb) / (na + nb);
        if (pooled * na >= 5.0 && pooled * nb >= 5.0) {
            merged.emplace_back(ca, cb);
            ca = cb = 0;
        }
    }
    if (ca + cb > 0) {
        if (merged.empty())
            throw Error(ErrorCode::TooFewSamples,
                        "chi-square: too few samples after merging");
        merged.back().first += ca;
        merged.back().second += cb;
    }

    double stat = 0.0;
    for (auto [oa, ob] : merged) {
        const double pooled = (oa + ob) / (na + nb);
        const double ea = pooled * na, eb = pooled * nb;
        stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    return finish(stat, static_cast<int>(merged.size()) - 1, alpha);
}

ChiSquareResult chi_square_independence(
    const std::vector<std::vector<std::uint64_t>>& table, double alpha) {
    if (table.empty() || table.front().empty())
        throw Error(ErrorCode::TooFewSamples, "chi-square: empty table");
    const std::size_t cols = table.front().size();

    // merge consecutive rows until each cell's expected count reaches 5
    std::vector<std::vector<double>> rows;
    std::vector<double> col_total(cols, 0.0);
    double grand = 0.0;
    for (const auto& row : table)
        for (std::size_t j = 0; j < cols; ++j) {
            col_total[j] += static_cast<double>(row[j]);
            grand += static_cast<double>(row[j]);
        }
    if (grand == 0)
        throw Error(ErrorCode::TooFewSamples, "chi-square: empty table");

    std::vector<double> pending(cols, 0.0);
    const double min_col_share =
        *std::min_element(col_total.begin(), col_total.end()) / grand;
    for (const auto& row : table) {
        for (std::size_t j = 0; j < cols; ++j)
            pending[j] += static_cast<double>(row[j]);
        const double pending_total =
            std::accumulate(pending.begin(), pending.end(), 0.0);
        if (pending_total * min_col_share >= 5.0) {
            rows.push_back(pending);
            std::fill(pending.begin(), pending.end(), 0.0);
        }
    }
    if (std::accumulate(pending.begin(), pending.end(), 0.0) > 0) {
        if (rows.empty())
            throw Error(ErrorCode::TooFewSamples,
                        "chi-square: too few samples after merging");
        for (std::size_t j = 0; j < cols; ++j) rows.back()[j] += pending[j];
    }

    double stat = 0.0;
    for (const auto& row : rows) {
        const double row_total =
            std::accumulate(row.begin(), row.end(), 0.0);
        for (std::size_t j = 0; j < cols; ++j) {
            const double expected = row_total * col_total[j] / grand;
            if (expected == 0) continue;
            const double d = row[j] - expected;
            stat += d * d / expected;
        }
    }
    const int dof =
        (static_cast<int>(rows.size()) - 1) * (static_cast<int>(cols) - 1);
    return finish(stat, dof, alpha);
}

void RunningStat::add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

double RunningStat::variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningStat::standard_error() const {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_))
                      : 0.0;
}

Histogram Histogram::of_integers(std::span<const std::uint64_t> values) {
    Histogram h;
    std::uint64_t max_value = 0;
    for (std::uint64_t v : values) max_value = std::max(max_value, v);
    h.counts.assign(max_value + 1, 0);
    for (std::uint64_t v : values) ++h.counts[v];
    h.total = values.size();
    h.bounds.resize(h.counts.size() + 1);
    for (std::size_t i = 0; i < h.bounds.size(); ++i)
        h.bounds[i] = static_cast<double>(i);
    return h;
}

void Histogram::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < counts.size(); ++i)
        out << bounds[i] << ',' << counts[i] << '\n';
}

double fit_log_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error(ErrorCode::TooFewSamples,
                    "exponent fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace sinkpop
