#ifndef SINKPOP_STATS_HPP
#define SINKPOP_STATS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sinkpop {

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double critical = 0.0; // quantile at 1 - alpha
    double alpha = 0.0;
    bool pass = true;
};

/// Pearson goodness-of-fit against the uniform distribution over the given
/// categories. Requires expected count per category >= 5.
ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts,
                                   double alpha);

/// Two-sample Pearson test that both count vectors come from one
/// distribution; adjacent categories are merged until every expected count
/// reaches 5.
ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b,
                                      double alpha);

/// Independence test on an r x c contingency table (rows merged to keep
/// expected counts >= 5).
ChiSquareResult chi_square_independence(
    const std::vector<std::vector<std::uint64_t>>& table, double alpha);

class RunningStat {
public:
    void add(double x);
    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const;
    double standard_error() const;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct Histogram {
    std::vector<double> bounds; // size counts.size() + 1, ascending
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    /// Unit buckets [k, k+1) covering 0..max(values).
    static Histogram of_integers(std::span<const std::uint64_t> values);
    void write_csv(std::ostream& out) const; // bucket_low,count
};

/// Least-squares slope of log y against log x.
double fit_log_log_slope(std::span<const double> x, std::span<const double> y);

} // namespace sinkpop

#endif
