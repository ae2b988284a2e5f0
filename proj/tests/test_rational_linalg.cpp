#include <doctest.h>

#include <optional>
#include <random>
#include <vector>

#include "sinkpop/errors.hpp"
#include "sinkpop/rational_linalg.hpp"

using namespace sinkpop;
using linalg::SparseIntMatrix;

namespace {

/// Test oracle: dense fraction Gaussian elimination, kept independent of the
/// production p-adic solver.
std::optional<std::vector<Rational>> dense_rational_solve(
    std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[k]);
        std::swap(b[piv], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t k = n; k-- > 0;) {
        Rational s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

SparseIntMatrix to_sparse(const std::vector<std::vector<std::int64_t>>& dense) {
    SparseIntMatrix m;
    m.n = static_cast<int>(dense.size());
    m.row_ptr.push_back(0);
    for (const auto& row : dense) {
        for (int j = 0; j < m.n; ++j)
            if (row[j] != 0) {
                m.col.push_back(j);
                m.val.push_back(row[j]);
            }
        m.row_ptr.push_back(static_cast<std::int32_t>(m.col.size()));
    }
    return m;
}

} // namespace

TEST_CASE("hand-checked 2x2 solves") {
    SparseIntMatrix a = to_sparse({{3, -1}, {-1, 3}});
    auto x = linalg::solve_exact(a, std::vector<std::int64_t>{4, 4});
    CHECK(x[0] == Rational(2));
    CHECK(x[1] == Rational(2));
    auto y = linalg::solve_exact(a, std::vector<std::int64_t>{1, 1});
    CHECK(y[0] == Rational(1, 2));
    CHECK(y[1] == Rational(1, 2));
}

TEST_CASE("singular matrices are reported") {
    SparseIntMatrix a = to_sparse({{1, 1}, {1, 1}});
    try {
        linalg::solve_exact(a, std::vector<std::int64_t>{1, 1});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SolveFailed);
    }
}

TEST_CASE("duplicate CSR entries act like their sum") {
    SparseIntMatrix a;
    a.n = 2;
    // row 0 has (0,0) entered twice: 1 + 2 = 3, plus (0,1) = -1
    a.row_ptr = {0, 3, 5};
    a.col = {0, 0, 1, 0, 1};
    a.val = {1, 2, -1, -1, 3};
    auto x = a.transposed(); // transpose round trip keeps duplicates
    CHECK(x.col.size() == 5);
    auto sol = linalg::solve_exact(a, std::vector<std::int64_t>{4, 4});
    CHECK(sol[0] == Rational(2));
    CHECK(sol[1] == Rational(2));
}

TEST_CASE("transpose flips coordinates") {
    SparseIntMatrix a = to_sparse({{1, 2}, {0, 3}});
    SparseIntMatrix t = a.transposed();
    // (0,1)=2 must move to (1,0)
    bool found = false;
    for (int i = 0; i < t.n; ++i)
        for (std::int32_t k = t.row_ptr[i]; k < t.row_ptr[i + 1]; ++k)
            if (i == 1 && t.col[k] == 0 && t.val[k] == 2) found = true;
    CHECK(found);
}

TEST_CASE("property: p-adic solver matches dense rational elimination") {
    std::mt19937_64 rng(2718);
    int solved = 0;
    while (solved < 150) {
        const int n = 1 + static_cast<int>(rng() % 18);
        std::vector<std::vector<std::int64_t>> dense(
            n, std::vector<std::int64_t>(n, 0));
        std::vector<std::vector<Rational>> dense_q(
            n, std::vector<Rational>(n, Rational(0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                // sparse-ish with entries in [-9, 9]
                if (rng() % 3 == 0 || i == j) {
                    std::int64_t v =
                        static_cast<std::int64_t>(rng() % 19) - 9;
                    dense[i][j] = v;
                    dense_q[i][j] = Rational(v);
                }
            }
        std::vector<std::int64_t> b(n);
        std::vector<Rational> bq(n);
        for (int i = 0; i < n; ++i) {
            b[i] = static_cast<std::int64_t>(rng() % 41) - 20;
            bq[i] = Rational(b[i]);
        }
        auto want = dense_rational_solve(dense_q, bq);
        if (!want) continue; // singular draw; try again
        ++solved;
        auto got = linalg::solve_exact(to_sparse(dense), b);
        REQUIRE(got.size() == want->size());
        for (int i = 0; i < n; ++i) CHECK(got[i] == (*want)[i]);
    }
}
