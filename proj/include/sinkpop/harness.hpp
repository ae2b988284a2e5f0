#ifndef SINKPOP_HARNESS_HPP
#define SINKPOP_HARNESS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sinkpop/exact.hpp"
#include "sinkpop/multigraph.hpp"
#include "sinkpop/popper.hpp"
#include "sinkpop/stats.hpp"

namespace sinkpop {

struct ExperimentReport {
    std::string name;
    nlohmann::ordered_json parameters;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    double mean = 0.0;
    double se = 0.0;
    double reference_value = 0.0;
    std::string reference_provenance;
    std::string verdict; // "pass" | "fail" | "info"
    double runtime_seconds = 0.0;
    nlohmann::ordered_json details;

    nlohmann::ordered_json to_json() const;
    static std::string csv_header();
    std::string to_csv_row() const;
    bool passed() const { return verdict != "fail"; }
};

/// Stable per-replicate seed derivation, so replicates can run in any order.
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate);

/// --- cycle conventions -------------------------------------------------
/// On the n-cycle (edge i joins v_i and v_{i+1}), "clockwise" means the arrow
/// points from v_{i+1} to v_i, i.e. direction bit 0.

/// Orientation of the n-cycle whose clockwise edge set is exactly `edges`.
Orientation cycle_orientation_from_clockwise(const Multigraph& cycle,
                                             std::span<const int> clockwise_edges);
int clockwise_count(const Multigraph& cycle, const Orientation& o);

/// Closed form for E(Q(v) | initial orientation) on the n-cycle:
/// (k/n) (1 + 3n - 2k - (2/k) sum a_j) over the clockwise offsets a_j at v.
Rational cycle_conditional_q_formula(const Multigraph& cycle,
                                     const Orientation& o, VertexId v);

/// --- experiments --------------------------------------------------------

ExperimentReport run_uniformity_experiment(const Multigraph& g,
                                           std::uint64_t samples,
                                           std::uint64_t seed,
                                           double alpha = 1e-3,
                                           ChoiceRule rule = ChoiceRule::QueueFifo);

/// Joint (tau bucket, SFO identity) independence: tau is a strong uniform time.
ExperimentReport run_strong_uniform_time_experiment(const Multigraph& g,
                                                    std::uint64_t samples,
                                                    std::uint64_t seed,
                                                    double alpha = 1e-3);

ExperimentReport run_mean_tau_experiment(const Multigraph& g,
                                         std::uint64_t samples,
                                         std::uint64_t seed);

/// Empirical E Q(G,v) <= n-1 (+3 SE) for every vertex.
ExperimentReport run_q_bound_experiment(const Multigraph& g,
                                        std::uint64_t samples,
                                        std::uint64_t seed);

/// Mean tau on the n-cycle conditioned on j initial clockwise edges vs 2j(n-j).
ExperimentReport run_conditional_cycle_experiment(int n, int j,
                                                  std::uint64_t samples,
                                                  std::uint64_t seed);

/// tau distributions of cycle(n) and lollipop(n) agree; exact comparison is
/// added for n <= 4.
ExperimentReport run_distribution_equality_experiment(int n,
                                                      std::uint64_t samples,
                                                      std::uint64_t seed,
                                                      double alpha = 1e-3);

/// Exact worst-case conditional run time: lollipop(n) peaks at n(n-1) for the
/// anti-SFO start, and on the cycle max E(Q(v)|init) is 3n/4 iff n is even.
ExperimentReport run_extremal_conditional_experiment(int n);

enum class ScalingFamily { Cycle, Complete };
const char* to_string(ScalingFamily family);

ExperimentReport run_scaling_benchmark(ScalingFamily family,
                                       const std::vector<int>& sizes,
                                       std::uint64_t samples_per_size,
                                       std::uint64_t seed);

/// The auxiliary walk behind the cycle/lollipop run-time identity: jumps of
/// -2 plus a geometric (mean 2), -1 plus geometric from state 0, absorbed at
/// n-1 or beyond. Two readings of the geometric are implemented; the one
/// matching sink popping empirically is marked canonical by
/// run_walk_experiment.
enum class WalkVariant { GeomFromOne, GeomResampled };

std::uint64_t abstract_walk_tau(int n, WalkVariant variant, std::mt19937_64& rng);

ExperimentReport run_walk_experiment(int n, std::uint64_t samples,
                                     std::uint64_t seed, double alpha = 1e-3);

/// All four choice rules on shared stacks: identical tau, pop multiset, SFO.
ExperimentReport run_diamond_experiment(const Multigraph& g,
                                        std::uint64_t realizations,
                                        std::uint64_t seed);

/// Pathwise Q(H,v) >= Q(G,v) under the shared-stack coupling.
ExperimentReport run_monotonicity_experiment(const Multigraph& g,
                                             const Multigraph& h,
                                             std::uint64_t runs,
                                             std::uint64_t seed);

} // namespace sinkpop

#endif
