#include "sinkpop/rational_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "sinkpop/errors.hpp"

namespace sinkpop::linalg {

SparseIntMatrix SparseIntMatrix::transposed() const {
    SparseIntMatrix t;
    t.n = n;
    t.row_ptr.assign(n + 1, 0);
    t.col.resize(col.size());
    t.val.resize(val.size());
    for (std::int32_t c : col) ++t.row_ptr[c + 1];
    for (int i = 0; i < n; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
    std::vector<std::int32_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (int i = 0; i < n; ++i)
        for (std::int32_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            std::int32_t c = col[k];
            t.col[cursor[c]] = i;
            t.val[cursor[c]] = val[k];
            ++cursor[c];
        }
    return t;
}

namespace {

constexpr std::uint64_t kMersenneP = (1ULL << 31) - 1;

struct MersenneField {
    static constexpr std::uint64_t p = kMersenneP;

    static std::uint64_t reduce(std::uint64_t t) {
        t = (t & p) + (t >> 31);
        t = (t & p) + (t >> 31);
        return t >= p ? t - p : t;
    }
    static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
        return reduce(a * b);
    }
    static std::uint64_t madd(std::uint64_t c, std::uint64_t a, std::uint64_t b) {
        return reduce(c + a * b); // a*b < 2^62, +c < 2^63
    }
    static std::uint64_t prime() { return p; }
};

struct GenericField {
    // fallback primes are rare; thread_local keeps concurrent solves safe
    static thread_local std::uint64_t runtime_p;
    static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(a) * b % runtime_p);
    }
    static std::uint64_t madd(std::uint64_t c, std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(a) * b + c) % runtime_p);
    }
    static std::uint64_t prime() { return runtime_p; }
};

thread_local std::uint64_t GenericField::runtime_p = 0;

template <class F>
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t acc = 1;
    while (exp) {
        if (exp & 1) acc = F::mul(acc, base);
        base = F::mul(base, base);
        exp >>= 1;
    }
    return acc;
}

template <class F>
std::uint64_t inv_mod(std::uint64_t a) {
    return pow_mod<F>(a, F::prime() - 2);
}

struct LuFactors {
    int n = 0;
    std::uint64_t p = 0;
    bool mersenne = false;
    std::vector<std::uint32_t> a;    // packed LU, row-major
    std::vector<std::int32_t> perm;  // row permutation
    std::vector<std::uint32_t> dinv; // inverses of U's diagonal
};

template <class F>
bool lu_factorize(LuFactors& lu) {
    const int n = lu.n;
    auto* a = lu.a.data();
    lu.perm.resize(n);
    std::iota(lu.perm.begin(), lu.perm.end(), 0);
    lu.dinv.assign(n, 0);

    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (a[static_cast<std::size_t>(i) * n + k] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return false;
        if (piv != k) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(piv) * n + j],
                          a[static_cast<std::size_t>(k) * n + j]);
            std::swap(lu.perm[piv], lu.perm[k]);
        }
        const std::uint64_t inv_piv = inv_mod<F>(a[static_cast<std::size_t>(k) * n + k]);
        lu.dinv[k] = static_cast<std::uint32_t>(inv_piv);
        const std::uint32_t* rk = a + static_cast<std::size_t>(k) * n;
        for (int i = k + 1; i < n; ++i) {
            std::uint32_t* ri = a + static_cast<std::size_t>(i) * n;
            if (ri[k] == 0) continue;
            const std::uint64_t l = F::mul(ri[k], inv_piv);
            ri[k] = static_cast<std::uint32_t>(l);
            if (l == 0) continue;
            const std::uint64_t neg = F::prime() - l;
            for (int j = k + 1; j < n; ++j)
                ri[j] = static_cast<std::uint32_t>(F::madd(ri[j], neg, rk[j]));
        }
    }
    return true;
}

template <class F>
void lu_solve(const LuFactors& lu, const std::uint64_t* rhs, std::uint64_t* x) {
    const int n = lu.n;
    const auto* a = lu.a.data();
    for (int i = 0; i < n; ++i) x[i] = rhs[lu.perm[i]];
    for (int i = 1; i < n; ++i) {
        const std::uint32_t* ri = a + static_cast<std::size_t>(i) * n;
        std::uint64_t s = x[i];
        for (int k = 0; k < i; ++k)
            if (ri[k]) s = F::madd(s, F::prime() - ri[k], x[k]);
        x[i] = s;
    }
    for (int k = n - 1; k >= 0; --k) {
        std::uint64_t s = x[k];
        const std::uint32_t* rk = a + static_cast<std::size_t>(k) * n;
        for (int j = k + 1; j < n; ++j)
            if (rk[j] && x[j]) s = F::madd(s, F::prime() - rk[j], x[j]);
        x[k] = F::mul(s, lu.dinv[k]);
    }
}

BigInt isqrt_floor(const BigInt& v) { return boost::multiprecision::sqrt(v); }

bool rational_reconstruct(const BigInt& c, const BigInt& modulus,
                          const BigInt& bound, Rational& out) {
    BigInt r0 = modulus, r1 = c;
    BigInt t0 = 0, t1 = 1;
    while (r1 > bound) {
        BigInt q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        t0 -= q * t1;
        std::swap(t0, t1);
    }
    if (t1 == 0) return false;
    if (t1 < 0) {
        t1 = -t1;
        r1 = -r1;
    }
    if (t1 > bound) return false;
    out = Rational(r1, t1);
    return true;
}

/// Cheap probabilistic screen before the exact check: evaluate the candidate
/// and the system modulo an independent prime. Spurious reconstructions from
/// a too-small modulus almost surely fail here, which keeps garbage
/// denominators away from the big-integer verification.
bool check_mod_prime(const SparseIntMatrix& a, std::span<const std::int64_t> b,
                     const std::vector<Rational>& x, std::uint64_t q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    auto mul_q = [q](std::uint64_t u, std::uint64_t v) {
        return static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(u) * v % q);
    };
    auto pow_q = [&](std::uint64_t base, std::uint64_t exp) {
        std::uint64_t r = 1;
        while (exp) {
            if (exp & 1) r = mul_q(r, base);
            base = mul_q(base, base);
            exp >>= 1;
        }
        return r;
    };
    const BigInt big_q = q;
    std::vector<std::uint64_t> xq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        BigInt num = numerator(x[i]) % big_q;
        if (num < 0) num += big_q;
        BigInt den = denominator(x[i]) % big_q;
        if (den == 0) return true; // cannot screen; let the exact check decide
        xq[i] = mul_q(num.convert_to<std::uint64_t>(),
                      pow_q(den.convert_to<std::uint64_t>(), q - 2));
    }
    for (int i = 0; i < a.n; ++i) {
        std::uint64_t s = 0;
        for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            std::int64_t v = a.val[k] % static_cast<std::int64_t>(q);
            if (v < 0) v += static_cast<std::int64_t>(q);
            s = (s + mul_q(static_cast<std::uint64_t>(v), xq[a.col[k]])) % q;
        }
        std::int64_t want = b[i] % static_cast<std::int64_t>(q);
        if (want < 0) want += static_cast<std::int64_t>(q);
        if (s != static_cast<std::uint64_t>(want)) return false;
    }
    return true;
}

bool verify_solution(const SparseIntMatrix& a, std::span<const std::int64_t> b,
                     const std::vector<Rational>& x) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    BigInt common = 1;
    for (const Rational& r : x) common = lcm(common, BigInt(denominator(r)));
    std::vector<BigInt> scaled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        scaled[i] = numerator(x[i]) * (common / denominator(x[i]));
    for (int i = 0; i < a.n; ++i) {
        BigInt s = 0;
        for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            s += BigInt(a.val[k]) * scaled[a.col[k]];
        if (s != BigInt(b[i]) * common) return false;
    }
    return true;
}

} // namespace

struct ExactSolver::Impl {
    SparseIntMatrix a;
    LuFactors lu;
    int max_lift_steps = 0;

    template <class F>
    std::vector<Rational> run_dixon(std::span<const std::int64_t> b) const;
};

ExactSolver::ExactSolver(SparseIntMatrix a) : impl_(std::make_unique<Impl>()) {
    impl_->a = std::move(a);
    const SparseIntMatrix& m = impl_->a;
    const int n = m.n;
    if (static_cast<int>(m.row_ptr.size()) != n + 1)
        throw Error(ErrorCode::SolveFailed, "malformed CSR matrix");

    // Hadamard-style bound on the digit count needed before numerator and
    // denominator of every entry fit under sqrt(p^K / 2).
    double det_bits = 0.0;
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        for (std::int32_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
            norm2 += static_cast<double>(m.val[k]) * static_cast<double>(m.val[k]);
        det_bits += 0.5 * std::log2(std::max(norm2, 1.0));
    }
    impl_->max_lift_steps =
        static_cast<int>((2.0 * det_bits + 192.0) / 31.0) + 4;

    const std::uint64_t primes[] = {kMersenneP, 2147483629ULL, 2147483587ULL};
    for (std::uint64_t p : primes) {
        LuFactors lu;
        lu.n = n;
        lu.p = p;
        lu.mersenne = (p == kMersenneP);
        lu.a.assign(static_cast<std::size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i)
            for (std::int32_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
                // accumulate so duplicate (i,j) entries behave like their sum
                std::uint32_t& cell =
                    lu.a[static_cast<std::size_t>(i) * n + m.col[k]];
                std::int64_t v = (static_cast<std::int64_t>(cell) + m.val[k]) %
                                 static_cast<std::int64_t>(p);
                if (v < 0) v += static_cast<std::int64_t>(p);
                cell = static_cast<std::uint32_t>(v);
            }
        bool ok;
        if (lu.mersenne) {
            ok = lu_factorize<MersenneField>(lu);
        } else {
            GenericField::runtime_p = p;
            ok = lu_factorize<GenericField>(lu);
        }
        if (ok) {
            impl_->lu = std::move(lu);
            return;
        }
    }
    throw Error(ErrorCode::SolveFailed, "matrix is singular");
}

ExactSolver::~ExactSolver() = default;
ExactSolver::ExactSolver(ExactSolver&&) noexcept = default;
ExactSolver& ExactSolver::operator=(ExactSolver&&) noexcept = default;

template <class F>
std::vector<Rational> ExactSolver::Impl::run_dixon(
    std::span<const std::int64_t> b) const {
    const int n = a.n;
    const std::int64_t p = static_cast<std::int64_t>(F::prime());

    std::vector<std::int64_t> residual(b.begin(), b.end());
    std::vector<std::uint64_t> rhs_mod(n), digit(n);
    std::vector<BigInt> acc(n, 0);
    BigInt modulus = 1;
    const BigInt big_p = p;

    std::vector<Rational> x(n);
    for (int step = 0; step < max_lift_steps; ++step) {
        for (int i = 0; i < n; ++i) {
            std::int64_t v = residual[i] % p;
            if (v < 0) v += p;
            rhs_mod[i] = static_cast<std::uint64_t>(v);
        }
        lu_solve<F>(lu, rhs_mod.data(), digit.data());
        for (int i = 0; i < n; ++i)
            if (digit[i]) acc[i] += modulus * digit[i];
        modulus *= big_p;

        for (int i = 0; i < n; ++i) {
            __int128 s = residual[i];
            for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
                s -= static_cast<__int128>(a.val[k]) *
                     static_cast<__int128>(digit[a.col[k]]);
            residual[i] = static_cast<std::int64_t>(s / p);
        }

        const int done = step + 1;
        const bool try_now = (done & (done - 1)) == 0 ||
                             (done > 64 && done % 16 == 0) ||
                             done == max_lift_steps;
        if (!try_now) continue;

        const BigInt bound = isqrt_floor((modulus - 1) / 2);
        if (!rational_reconstruct(acc[0], modulus, bound, x[0])) continue;

        // Solution entries share most denominator factors, so one Euclid
        // usually pins the common denominator and the remaining entries fall
        // out of a single multiply-mod each. Entries that do not look like
        // small multiples fall back to a full reconstruction.
        using boost::multiprecision::denominator;
        BigInt common_den = denominator(x[0]);
        const BigInt loose = modulus >> 64;
        bool all_ok = true;
        for (int i = 1; i < n && all_ok; ++i) {
            BigInt t = acc[i] * common_den % modulus;
            if (t * 2 > modulus) t -= modulus;
            if (abs(t) <= loose) {
                x[i] = Rational(t, common_den);
            } else if (rational_reconstruct(acc[i], modulus, bound, x[i])) {
                common_den = lcm(common_den, BigInt(denominator(x[i])));
            } else {
                all_ok = false;
            }
        }
        if (all_ok && check_mod_prime(a, b, x, 2147483629ULL) &&
            verify_solution(a, b, x))
            return x;
    }
    throw Error(ErrorCode::SolveFailed,
                "p-adic lifting did not converge to a verified solution");
}

std::vector<Rational> ExactSolver::solve(std::span<const std::int64_t> b) const {
    if (static_cast<int>(b.size()) != impl_->a.n)
        throw Error(ErrorCode::SolveFailed, "rhs size mismatch");
    if (impl_->a.n == 0) return {};
    if (impl_->lu.mersenne) return impl_->run_dixon<MersenneField>(b);
    GenericField::runtime_p = impl_->lu.p;
    return impl_->run_dixon<GenericField>(b);
}

std::vector<Rational> solve_exact(const SparseIntMatrix& a,
                                  std::span<const std::int64_t> b) {
    return ExactSolver(a).solve(b);
}

} // namespace sinkpop::linalg
