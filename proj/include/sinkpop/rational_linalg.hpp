#ifndef SINKPOP_RATIONAL_LINALG_HPP
#define SINKPOP_RATIONAL_LINALG_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sinkpop {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace linalg {

/// Square sparse integer matrix in CSR form.
struct SparseIntMatrix {
    int n = 0;
    std::vector<std::int32_t> row_ptr; // size n+1
    std::vector<std::int32_t> col;
    std::vector<std::int64_t> val;

    SparseIntMatrix transposed() const;
};

/// Exact rational solver for A x = b with integer A and b, built on p-adic
/// lifting: one dense LU factorization mod a word-size prime, then cheap
/// digit-by-digit lifting and rational reconstruction. Every returned
/// solution is re-verified against A over exact integers.
class ExactSolver {
public:
    explicit ExactSolver(SparseIntMatrix a); // throws SolveFailed if singular
    ~ExactSolver();
    ExactSolver(ExactSolver&&) noexcept;
    ExactSolver& operator=(ExactSolver&&) noexcept;

    std::vector<Rational> solve(std::span<const std::int64_t> b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper.
std::vector<Rational> solve_exact(const SparseIntMatrix& a,
                                  std::span<const std::int64_t> b);

} // namespace linalg
} // namespace sinkpop

#endif
