#include "sinkpop/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "sinkpop/errors.hpp"

namespace sinkpop {

namespace {

struct StatePacker {
    std::vector<EdgeId> free_edges;
    int total_edges = 0;

    static StatePacker for_graph(const Multigraph& g, int max_free,
                                 const char* who) {
        if (g.free_edge_count() > max_free) {
            std::ostringstream msg;
            msg << who << ": " << g.free_edge_count()
                << " non-loop edges exceed the limit of " << max_free;
            throw Error(ErrorCode::TooLarge, msg.str());
        }
        StatePacker p;
        p.total_edges = g.edge_count();
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            if (!g.edge(e).is_self_loop()) p.free_edges.push_back(e);
        return p;
    }

    int bits() const { return static_cast<int>(free_edges.size()); }
    std::uint32_t count() const { return 1u << bits(); }

    Orientation unpack(std::uint32_t s) const {
        Orientation o(total_edges);
        for (int i = 0; i < bits(); ++i)
            o.set_bit(free_edges[i], static_cast<std::uint8_t>((s >> i) & 1));
        return o;
    }

    std::uint32_t pack(const Orientation& o) const {
        std::uint32_t s = 0;
        for (int i = 0; i < bits(); ++i)
            s |= static_cast<std::uint32_t>(o.bit(free_edges[i]) & 1) << i;
        return s;
    }
};

/// Scratch-buffer sink scan shared by the census and the chain builder.
class StateScanner {
public:
    StateScanner(const Multigraph& g, const StatePacker& packer)
        : g_(g), packer_(packer), out_(g.vertex_count()), base_(g.vertex_count()) {
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            base_[v] = g.has_self_loop(v) ? 1 : 0;
    }

    /// Fills the out-degree table for the packed state.
    void scan(std::uint32_t s) {
        out_ = base_;
        for (int i = 0; i < packer_.bits(); ++i) {
            const Edge& e = g_.edge(packer_.free_edges[i]);
            // bit 1: head is endpoint b, so the tail is a
            ++out_[(s >> i) & 1 ? e.a : e.b];
        }
    }

    bool is_sink(VertexId v) const {
        return g_.degree(v) > 0 && out_[v] == 0;
    }

    VertexId select_sink(ExactRule rule) const {
        const int n = g_.vertex_count();
        if (rule == ExactRule::MinSink) {
            for (VertexId v = 0; v < n; ++v)
                if (is_sink(v)) return v;
        } else {
            for (VertexId v = n - 1; v >= 0; --v)
                if (is_sink(v)) return v;
        }
        return -1;
    }

private:
    const Multigraph& g_;
    const StatePacker& packer_;
    std::vector<int> out_;
    std::vector<int> base_;
};

Rational sum_rationals(const std::vector<Rational>& xs) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    // entries share denominators, so bucket on them and add numerators
    std::map<BigInt, BigInt> buckets;
    for (const Rational& x : xs) buckets[BigInt(denominator(x))] += numerator(x);
    Rational total = 0;
    for (const auto& [den, num] : buckets) total += Rational(num, den);
    return total;
}

} // namespace

SfoCensus enumerate_sfos(const Multigraph& g) {
    StatePacker packer =
        StatePacker::for_graph(g, ExactChain::kMaxFreeEdges, "enumerate_sfos");
    StateScanner scanner(g, packer);
    SfoCensus census;
    for (std::uint32_t s = 0; s < packer.count(); ++s) {
        scanner.scan(s);
        bool sink_free = true;
        for (VertexId v = 0; v < g.vertex_count() && sink_free; ++v)
            sink_free = !scanner.is_sink(v);
        if (sink_free) census.members.push_back(packer.unpack(s));
    }
    census.count = census.members.size();
    return census;
}

struct ExactChain::Impl {
    Multigraph g;
    ExactRule rule;
    StatePacker packer;
    bool rational = false;

    std::vector<std::uint32_t> vertex_mask; // free-edge bits at each vertex
    std::vector<std::int32_t> popped;       // per state; -1 when absorbing
    std::vector<std::int32_t> tindex;       // per state -> transient index
    std::vector<std::uint32_t> tstate;      // transient index -> state
    std::vector<std::uint32_t> absorbing;   // ascending
    std::vector<std::int32_t> abs_index;    // per state -> absorbing index

    // rational-path caches
    std::optional<linalg::SparseIntMatrix> matrix;
    std::optional<linalg::ExactSolver> solver;    // A
    std::optional<linalg::ExactSolver> solver_t;  // A transposed
    std::optional<std::vector<Rational>> tau_by_state;
    std::map<VertexId, std::vector<Rational>> q_by_state;
    std::optional<std::vector<Rational>> visits; // z: scaled visit counts

    // floating-path caches
    std::optional<std::pair<std::vector<double>, double>> tau_f;
    std::map<VertexId, std::pair<std::vector<double>, double>> q_f;

    std::uint32_t state_count() const { return packer.count(); }
    int deg_bits(std::uint32_t s) const {
        return std::popcount(vertex_mask[popped[s]]);
    }

    template <class Fn>
    void for_each_successor(std::uint32_t s, Fn&& fn) const {
        const std::uint32_t mask = vertex_mask[popped[s]];
        const std::uint32_t base = s & ~mask;
        std::uint32_t sub = mask;
        for (;;) {
            fn(base | sub);
            if (sub == 0) break;
            sub = (sub - 1) & mask;
        }
    }

    void build(const Multigraph& graph, ExactRule r, bool force_float);
    const linalg::SparseIntMatrix& ensure_matrix();
    const std::vector<Rational>& ensure_tau();
    const std::vector<Rational>& ensure_q(VertexId v);
    const std::vector<Rational>& ensure_visits();
    const std::pair<std::vector<double>, double>& ensure_tau_f();
    const std::pair<std::vector<double>, double>& ensure_q_f(VertexId v);
    std::pair<std::vector<double>, double> jacobi_solve(
        const std::vector<double>& rhs) const;
};

void ExactChain::Impl::build(const Multigraph& graph, ExactRule r,
                             bool force_float) {
    g = graph;
    rule = r;
    require_class_s(g, "exact chain");
    packer = StatePacker::for_graph(g, kMaxFreeEdges, "exact chain");
    rational = !force_float && packer.bits() <= kMaxFreeEdgesRational;

    vertex_mask.assign(g.vertex_count(), 0);
    for (int i = 0; i < packer.bits(); ++i) {
        const Edge& e = g.edge(packer.free_edges[i]);
        vertex_mask[e.a] |= 1u << i;
        vertex_mask[e.b] |= 1u << i;
    }

    const std::uint32_t states = packer.count();
    popped.assign(states, -1);
    tindex.assign(states, -1);
    abs_index.assign(states, -1);
    StateScanner scanner(g, packer);
    for (std::uint32_t s = 0; s < states; ++s) {
        scanner.scan(s);
        VertexId v = scanner.select_sink(rule);
        popped[s] = v;
        if (v < 0) {
            abs_index[s] = static_cast<std::int32_t>(absorbing.size());
            absorbing.push_back(s);
        } else {
            tindex[s] = static_cast<std::int32_t>(tstate.size());
            tstate.push_back(s);
        }
    }
}

const linalg::SparseIntMatrix& ExactChain::Impl::ensure_matrix() {
    if (matrix) return *matrix;
    linalg::SparseIntMatrix a;
    a.n = static_cast<int>(tstate.size());
    a.row_ptr.push_back(0);
    for (std::uint32_t s : tstate) {
        // row of D - C: diagonal 2^d - 1 (the state is always its own
        // successor), -1 for every other transient successor
        a.col.push_back(tindex[s]);
        a.val.push_back((1ll << deg_bits(s)) - 1);
        for_each_successor(s, [&](std::uint32_t s2) {
            if (s2 != s && tindex[s2] >= 0) {
                a.col.push_back(tindex[s2]);
                a.val.push_back(-1);
            }
        });
        a.row_ptr.push_back(static_cast<std::int32_t>(a.col.size()));
    }
    matrix = std::move(a);
    return *matrix;
}

const std::vector<Rational>& ExactChain::Impl::ensure_tau() {
    if (tau_by_state) return *tau_by_state;
    const auto& a = ensure_matrix();
    if (!solver) solver.emplace(a);
    std::vector<std::int64_t> rhs(tstate.size());
    for (std::size_t i = 0; i < tstate.size(); ++i)
        rhs[i] = 1ll << deg_bits(tstate[i]);
    tau_by_state = solver->solve(rhs);
    return *tau_by_state;
}

const std::vector<Rational>& ExactChain::Impl::ensure_q(VertexId v) {
    auto it = q_by_state.find(v);
    if (it != q_by_state.end()) return it->second;
    const auto& a = ensure_matrix();
    if (!solver) solver.emplace(a);
    std::vector<std::int64_t> rhs(tstate.size(), 0);
    for (std::size_t i = 0; i < tstate.size(); ++i)
        if (popped[tstate[i]] == v) rhs[i] = 1ll << deg_bits(tstate[i]);
    return q_by_state.emplace(v, solver->solve(rhs)).first->second;
}

const std::vector<Rational>& ExactChain::Impl::ensure_visits() {
    if (visits) return *visits;
    if (!solver_t) solver_t.emplace(ensure_matrix().transposed());
    std::vector<std::int64_t> rhs(tstate.size(), 1);
    visits = solver_t->solve(rhs);
    return *visits;
}

std::pair<std::vector<double>, double> ExactChain::Impl::jacobi_solve(
    const std::vector<double>& rhs) const {
    // x = rhs + Q x over transient states, swept until the residual bound
    const std::size_t t = tstate.size();
    std::vector<double> x(t, 0.0), next(t, 0.0);
    double residual = 0.0;
    const int max_sweeps = 400000;
    for (int sweep = 0;; ++sweep) {
        residual = 0.0;
        for (std::size_t i = 0; i < t; ++i) {
            const std::uint32_t s = tstate[i];
            double acc = 0.0;
            for_each_successor(s, [&](std::uint32_t s2) {
                if (tindex[s2] >= 0) acc += x[tindex[s2]];
            });
            next[i] = rhs[i] + std::ldexp(acc, -deg_bits(s));
            residual = std::max(residual, std::abs(next[i] - x[i]));
        }
        x.swap(next);
        if (residual < 0.5e-9) break;
        if (sweep >= max_sweeps)
            throw Error(ErrorCode::SolveFailed,
                        "floating chain iteration did not reach residual 1e-9");
    }
    return {std::move(x), residual};
}

const std::pair<std::vector<double>, double>& ExactChain::Impl::ensure_tau_f() {
    if (tau_f) return *tau_f;
    tau_f = jacobi_solve(std::vector<double>(tstate.size(), 1.0));
    return *tau_f;
}

const std::pair<std::vector<double>, double>& ExactChain::Impl::ensure_q_f(
    VertexId v) {
    auto it = q_f.find(v);
    if (it != q_f.end()) return it->second;
    std::vector<double> rhs(tstate.size(), 0.0);
    for (std::size_t i = 0; i < tstate.size(); ++i)
        if (popped[tstate[i]] == v) rhs[i] = 1.0;
    return q_f.emplace(v, jacobi_solve(rhs)).first->second;
}

ExactChain::ExactChain(const Multigraph& g, ExactRule rule, bool force_float)
    : impl_(std::make_unique<Impl>()) {
    impl_->build(g, rule, force_float);
}

ExactChain::~ExactChain() = default;
ExactChain::ExactChain(ExactChain&&) noexcept = default;
ExactChain& ExactChain::operator=(ExactChain&&) noexcept = default;

const Multigraph& ExactChain::graph() const { return impl_->g; }
ExactRule ExactChain::rule() const { return impl_->rule; }
int ExactChain::free_edge_count() const { return impl_->packer.bits(); }
bool ExactChain::rational_mode() const { return impl_->rational; }
std::uint32_t ExactChain::state_count() const { return impl_->state_count(); }

std::uint32_t ExactChain::pack(const Orientation& o) const {
    if (o.size() != impl_->g.edge_count())
        throw Error(ErrorCode::IndexOutOfRange, "orientation size mismatch");
    return impl_->packer.pack(o);
}

Orientation ExactChain::unpack(std::uint32_t state) const {
    return impl_->packer.unpack(state);
}

bool ExactChain::is_absorbing(std::uint32_t state) const {
    return impl_->popped[state] < 0;
}

VertexId ExactChain::popped_vertex(std::uint32_t state) const {
    return impl_->popped[state];
}

const std::vector<std::uint32_t>& ExactChain::absorbing_states() const {
    return impl_->absorbing;
}

ExactScalar ExactChain::expected_tau_at(std::uint32_t state) {
    ExactScalar out;
    if (is_absorbing(state)) {
        out.value = 0.0;
        if (impl_->rational) out.exact = Rational(0);
        return out;
    }
    if (impl_->rational) {
        const Rational& r = impl_->ensure_tau()[impl_->tindex[state]];
        out.exact = r;
        out.value = r.convert_to<double>();
    } else {
        const auto& [x, res] = impl_->ensure_tau_f();
        out.value = x[impl_->tindex[state]];
        out.residual = res;
    }
    return out;
}

ExactScalar ExactChain::expected_tau_given(const Orientation& init) {
    return expected_tau_at(pack(init));
}

ExactScalar ExactChain::expected_tau() {
    ExactScalar out;
    if (impl_->rational) {
        Rational total = impl_->tstate.empty()
                             ? Rational(0)
                             : sum_rationals(impl_->ensure_tau());
        Rational mean = total / impl_->state_count();
        out.exact = mean;
        out.value = mean.convert_to<double>();
    } else {
        const auto& [x, res] = impl_->ensure_tau_f();
        double total = 0.0;
        for (double v : x) total += v;
        out.value = total / impl_->state_count();
        out.residual = res;
    }
    return out;
}

ExactScalar ExactChain::expected_q_at(VertexId v, std::uint32_t state) {
    if (v < 0 || v >= impl_->g.vertex_count())
        throw Error(ErrorCode::IndexOutOfRange, "vertex out of range");
    ExactScalar out;
    if (is_absorbing(state)) {
        out.value = 0.0;
        if (impl_->rational) out.exact = Rational(0);
        return out;
    }
    if (impl_->rational) {
        const Rational& r = impl_->ensure_q(v)[impl_->tindex[state]];
        out.exact = r;
        out.value = r.convert_to<double>();
    } else {
        const auto& [x, res] = impl_->ensure_q_f(v);
        out.value = x[impl_->tindex[state]];
        out.residual = res;
    }
    return out;
}

ExactScalar ExactChain::expected_q_given(VertexId v, const Orientation& init) {
    return expected_q_at(v, pack(init));
}

ExactScalar ExactChain::expected_q(VertexId v) {
    if (v < 0 || v >= impl_->g.vertex_count())
        throw Error(ErrorCode::IndexOutOfRange, "vertex out of range");
    ExactScalar out;
    if (impl_->rational) {
        Rational total = impl_->tstate.empty()
                             ? Rational(0)
                             : sum_rationals(impl_->ensure_q(v));
        Rational mean = total / impl_->state_count();
        out.exact = mean;
        out.value = mean.convert_to<double>();
    } else {
        const auto& [x, res] = impl_->ensure_q_f(v);
        double total = 0.0;
        for (double e : x) total += e;
        out.value = total / impl_->state_count();
        out.residual = res;
    }
    return out;
}

std::vector<ExactScalar> ExactChain::absorption_distribution() {
    const std::size_t n_abs = impl_->absorbing.size();
    std::vector<ExactScalar> out(n_abs);
    if (impl_->rational) {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        // b_eta = (1 + sum of scaled visit counts flowing into eta) / 2^m0,
        // with z from (D - C)^T z = 1 so that x_s = 2^(d_s - m0) z_s
        std::vector<std::map<BigInt, BigInt>> inflow(n_abs);
        if (!impl_->tstate.empty()) {
            const auto& z = impl_->ensure_visits();
            for (std::size_t i = 0; i < impl_->tstate.size(); ++i) {
                const std::uint32_t s = impl_->tstate[i];
                impl_->for_each_successor(s, [&](std::uint32_t s2) {
                    if (impl_->abs_index[s2] >= 0)
                        inflow[impl_->abs_index[s2]][BigInt(denominator(z[i]))] +=
                            numerator(z[i]);
                });
            }
        }
        const BigInt scale = BigInt(impl_->state_count());
        for (std::size_t k = 0; k < n_abs; ++k) {
            Rational mass(1, scale);
            for (const auto& [den, num] : inflow[k])
                mass += Rational(num, den * scale);
            out[k].exact = mass;
            out[k].value = mass.convert_to<double>();
        }
    } else {
        // forward mass scatter from the uniform initial distribution
        const double unit = std::ldexp(1.0, -impl_->packer.bits());
        std::vector<double> mass(impl_->tstate.size(), unit);
        std::vector<double> absorbed(n_abs, 0.0);
        for (std::uint32_t s : impl_->absorbing)
            absorbed[impl_->abs_index[s]] = unit;
        double transient_mass = unit * static_cast<double>(impl_->tstate.size());
        std::vector<double> next(impl_->tstate.size(), 0.0);
        std::uint64_t steps = 0;
        while (transient_mass > 1e-15) {
            if (++steps > (1u << 20))
                throw Error(ErrorCode::SolveFailed,
                            "absorption scatter did not drain the chain");
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t i = 0; i < impl_->tstate.size(); ++i) {
                if (mass[i] == 0.0) continue;
                const std::uint32_t s = impl_->tstate[i];
                const double w = std::ldexp(mass[i], -impl_->deg_bits(s));
                impl_->for_each_successor(s, [&](std::uint32_t s2) {
                    if (impl_->tindex[s2] >= 0)
                        next[impl_->tindex[s2]] += w;
                    else
                        absorbed[impl_->abs_index[s2]] += w;
                });
            }
            mass.swap(next);
            transient_mass = 0.0;
            for (double v : mass) transient_mass += v;
        }
        for (std::size_t k = 0; k < n_abs; ++k) {
            out[k].value = absorbed[k];
            out[k].residual = transient_mass;
        }
    }
    return out;
}

TauDistribution ExactChain::tau_distribution(double tail_bound,
                                             std::uint64_t max_steps) {
    TauDistribution dist;
    dist.is_exact = impl_->rational;
    const std::uint32_t states = impl_->state_count();
    if (impl_->rational) {
        std::vector<Rational> mass(impl_->tstate.size(),
                                   Rational(BigInt(1), BigInt(states)));
        dist.p_exact.push_back(
            Rational(BigInt(impl_->absorbing.size()), BigInt(states)));
        Rational transient_mass =
            Rational(BigInt(impl_->tstate.size()), BigInt(states));
        std::vector<Rational> next(impl_->tstate.size());
        for (std::uint64_t k = 0;
             transient_mass.convert_to<double>() >= tail_bound; ++k) {
            if (k >= max_steps)
                throw Error(ErrorCode::SolveFailed,
                            "tau distribution horizon exceeded");
            for (auto& r : next) r = 0;
            Rational absorbed_step = 0;
            for (std::size_t i = 0; i < impl_->tstate.size(); ++i) {
                if (mass[i] == 0) continue;
                const std::uint32_t s = impl_->tstate[i];
                const Rational w =
                    mass[i] / Rational(std::int64_t(1) << impl_->deg_bits(s));
                impl_->for_each_successor(s, [&](std::uint32_t s2) {
                    if (impl_->tindex[s2] >= 0)
                        next[impl_->tindex[s2]] += w;
                    else
                        absorbed_step += w;
                });
            }
            mass.swap(next);
            dist.p_exact.push_back(absorbed_step);
            transient_mass -= absorbed_step;
        }
        dist.tail_exact = transient_mass;
        dist.tail = transient_mass.convert_to<double>();
        dist.p.reserve(dist.p_exact.size());
        for (const Rational& r : dist.p_exact)
            dist.p.push_back(r.convert_to<double>());
    } else {
        const double unit = std::ldexp(1.0, -impl_->packer.bits());
        std::vector<double> mass(impl_->tstate.size(), unit);
        dist.p.push_back(unit * static_cast<double>(impl_->absorbing.size()));
        double transient_mass = unit * static_cast<double>(impl_->tstate.size());
        std::vector<double> next(impl_->tstate.size());
        for (std::uint64_t k = 0; transient_mass >= tail_bound; ++k) {
            if (k >= max_steps)
                throw Error(ErrorCode::SolveFailed,
                            "tau distribution horizon exceeded");
            std::fill(next.begin(), next.end(), 0.0);
            double absorbed_step = 0.0;
            for (std::size_t i = 0; i < impl_->tstate.size(); ++i) {
                if (mass[i] == 0.0) continue;
                const std::uint32_t s = impl_->tstate[i];
                const double w = std::ldexp(mass[i], -impl_->deg_bits(s));
                impl_->for_each_successor(s, [&](std::uint32_t s2) {
                    if (impl_->tindex[s2] >= 0)
                        next[impl_->tindex[s2]] += w;
                    else
                        absorbed_step += w;
                });
            }
            mass.swap(next);
            dist.p.push_back(absorbed_step);
            transient_mass -= absorbed_step;
        }
        dist.tail = transient_mass;
    }
    return dist;
}

ExactScalar exact_expected_tau(const Multigraph& g, ExactRule rule) {
    return ExactChain(g, rule).expected_tau();
}

ExactScalar exact_expected_tau(const Multigraph& g, const Orientation& init,
                               ExactRule rule) {
    return ExactChain(g, rule).expected_tau_given(init);
}

ExactScalar exact_expected_q(const Multigraph& g, VertexId v, ExactRule rule) {
    return ExactChain(g, rule).expected_q(v);
}

ExactScalar exact_expected_q(const Multigraph& g, VertexId v,
                             const Orientation& init, ExactRule rule) {
    return ExactChain(g, rule).expected_q_given(v, init);
}

std::vector<std::pair<Orientation, ExactScalar>> exact_absorption_distribution(
    const Multigraph& g, ExactRule rule) {
    ExactChain chain(g, rule);
    std::vector<ExactScalar> dist = chain.absorption_distribution();
    std::vector<std::pair<Orientation, ExactScalar>> out;
    out.reserve(dist.size());
    for (std::size_t k = 0; k < dist.size(); ++k)
        out.emplace_back(chain.unpack(chain.absorbing_states()[k]), dist[k]);
    return out;
}

TauDistribution exact_tau_distribution(const Multigraph& g, double tail_bound,
                                       ExactRule rule) {
    return ExactChain(g, rule).tau_distribution(tail_bound);
}

std::vector<DirectedSpanningTree> enumerate_dsts(const Digraph& h,
                                                 VertexId root) {
    const int n = h.vertex_count();
    if (root < 0 || root >= n)
        throw Error(ErrorCode::IndexOutOfRange, "root out of range");

    double choice_count = 1.0;
    std::vector<VertexId> choosers;
    for (VertexId v = 0; v < n; ++v) {
        if (v == root) continue;
        if (h.out_degree(v) == 0) return {}; // v can never point anywhere
        choice_count *= static_cast<double>(h.out_degree(v));
        choosers.push_back(v);
    }
    if (choice_count > 1e6)
        throw Error(ErrorCode::TooLarge,
                    "directed-spanning-tree enumeration above 10^6 choice vectors");

    std::vector<DirectedSpanningTree> trees;
    std::vector<int> counter(choosers.size(), 0);
    std::vector<int> stamp(n, -1);
    std::vector<std::uint8_t> kind(n, 0); // 1 = on current walk, 2 = reaches root
    std::vector<VertexId> walk;
    int iteration = 0;
    for (;;) {
        DirectedSpanningTree t;
        t.root = root;
        t.parent_arc.assign(n, -1);
        for (std::size_t i = 0; i < choosers.size(); ++i)
            t.parent_arc[choosers[i]] = h.out_arcs(choosers[i])[counter[i]];

        bool acyclic = true;
        ++iteration;
        stamp[root] = iteration;
        kind[root] = 2;
        for (VertexId v = 0; v < n && acyclic; ++v) {
            if (stamp[v] == iteration && kind[v] == 2) continue;
            walk.clear();
            VertexId w = v;
            for (;;) {
                if (stamp[w] == iteration) {
                    if (kind[w] != 2) acyclic = false; // closed onto the walk
                    break;
                }
                stamp[w] = iteration;
                kind[w] = 1;
                walk.push_back(w);
                w = h.arc(t.parent_arc[w]).to;
            }
            if (acyclic)
                for (VertexId u : walk) kind[u] = 2;
        }
        if (acyclic) trees.push_back(std::move(t));

        std::size_t pos = 0;
        for (; pos < choosers.size(); ++pos) {
            if (++counter[pos] < h.out_degree(choosers[pos])) break;
            counter[pos] = 0;
        }
        if (pos == choosers.size()) break;
    }
    return trees;
}

} // namespace sinkpop
