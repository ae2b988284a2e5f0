#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sinkpop/errors.hpp"
#include "sinkpop/stats.hpp"

using namespace sinkpop;

TEST_CASE("chi-square against uniform: worked examples") {
    std::vector<std::uint64_t> even{50, 50};
    ChiSquareResult r = chi_square_uniform(even, 1e-3);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.pass);

    // (100-50)^2/50 + (0-50)^2/50 = 100
    std::vector<std::uint64_t> lopsided{100, 0};
    r = chi_square_uniform(lopsided, 1e-3);
    CHECK(r.statistic == doctest::Approx(100.0));
    CHECK_FALSE(r.pass); // critical at dof 1 is ~10.83

    std::vector<std::uint64_t> six(6, 30);
    r = chi_square_uniform(six, 1e-3);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.pass);
}

TEST_CASE("chi-square refuses starved categories") {
    std::vector<std::uint64_t> tiny{2, 2};
    try {
        chi_square_uniform(tiny, 1e-3);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewSamples);
    }
}

TEST_CASE("a single category is trivially uniform") {
    std::vector<std::uint64_t> one{7};
    ChiSquareResult r = chi_square_uniform(one, 1e-3);
    CHECK(r.pass);
    CHECK(r.dof == 0);
}

TEST_CASE("two-sample chi-square: identical histograms score zero") {
    std::vector<std::uint64_t> a{40, 30, 30};
    ChiSquareResult r = chi_square_two_sample(a, a, 1e-3);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.pass);
}

TEST_CASE("two-sample chi-square merges sparse tails") {
    std::vector<std::uint64_t> a{100, 50, 3, 1, 1};
    std::vector<std::uint64_t> b{95, 55, 2, 2, 0};
    ChiSquareResult r = chi_square_two_sample(a, b, 1e-3);
    CHECK(r.pass);
    CHECK(r.dof >= 1);
}

TEST_CASE("two-sample chi-square flags different laws") {
    std::vector<std::uint64_t> a{1000, 100, 10};
    std::vector<std::uint64_t> b{10, 100, 1000};
    CHECK_FALSE(chi_square_two_sample(a, b, 1e-3).pass);
}

TEST_CASE("independence test on a product table passes") {
    std::vector<std::vector<std::uint64_t>> table{
        {100, 200}, {50, 100}, {25, 50}};
    CHECK(chi_square_independence(table, 1e-3).pass);
}

TEST_CASE("independence test flags coupled columns") {
    std::vector<std::vector<std::uint64_t>> table{{500, 10}, {10, 500}};
    CHECK_FALSE(chi_square_independence(table, 1e-3).pass);
}

TEST_CASE("running statistics") {
    RunningStat s;
    for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) s.add(x);
    CHECK(s.count() == 8);
    CHECK(s.mean() == doctest::Approx(5.0));
    CHECK(s.variance() == doctest::Approx(32.0 / 7.0));
    CHECK(s.standard_error() ==
          doctest::Approx(std::sqrt(32.0 / 7.0 / 8.0)));
}

TEST_CASE("integer histogram and CSV emission") {
    std::vector<std::uint64_t> values{0, 1, 1, 3};
    Histogram h = Histogram::of_integers(values);
    CHECK(h.total == 4);
    REQUIRE(h.counts.size() == 4);
    CHECK(h.counts[1] == 2);
    CHECK(h.counts[2] == 0);
    std::uint64_t sum = 0;
    for (auto c : h.counts) sum += c;
    CHECK(sum == h.total);

    std::ostringstream out;
    h.write_csv(out);
    CHECK(out.str() == "0,1\n1,2\n2,0\n3,1\n");
}

TEST_CASE("log-log slope recovers exact power laws") {
    std::vector<double> x{100, 200, 400};
    std::vector<double> y{1e4, 4e4, 16e4};
    CHECK(fit_log_log_slope(x, y) == doctest::Approx(2.0));
    std::vector<double> y3{8, 64, 512};
    std::vector<double> x3{2, 4, 8};
    CHECK(fit_log_log_slope(x3, y3) == doctest::Approx(3.0));
}
