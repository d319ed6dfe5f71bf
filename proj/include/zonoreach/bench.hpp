#ifndef ZONOREACH_BENCH_HPP_
#define ZONOREACH_BENCH_HPP_

#include "zonoreach/geometry.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace zonoreach
{

/// One random Minkowski-difference instance: Z, E and a box W.
struct DiffInstance
{
    std::uint64_t id = 0;
    Zonotope Z;
    Matrix E;
    Box W;
};

/**
 * @brief Deterministic instance for (seed, id): generators i.i.d. N(0, 1),
 * center 0; W radii uniform in [0.05, 0.3] times the mean generator norm;
 * E = I + 0.1 N(0, 1) redrawn until cond(E) <= 10. N = round(order * n).
 * W is then scaled down, if needed, so that EW fits in half the
 * parallelotope spanned by the first n generators.
 */
DiffInstance random_diff_instance(std::uint64_t seed, std::uint64_t id, Eigen::Index n, double order);

/// Axis-aligned instance: Z = (diag r, c), E = I, W = box with radii below r.
DiffInstance random_box_instance(std::uint64_t seed, std::uint64_t id, Eigen::Index n);

/// Random zonotope with i.i.d. N(0, 1) generators and zero center.
Zonotope random_zonotope(std::uint64_t seed, std::uint64_t id, Eigen::Index n, Eigen::Index N);

/// Engine seeded from (seed, id, salt) through std::seed_seq.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t id, std::uint64_t salt = 0);

struct BenchSpec
{
    std::vector<Eigen::Index> dims{2, 3};
    std::vector<double> orders{1.0, 2.0, 3.0, 4.0, 5.0};
    std::size_t count = 100;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t volume_cap = 200000;
};

/// Instance i uses dims[i % |dims|] and orders[(i / |dims|) % |orders|].
std::pair<Eigen::Index, double> bench_shape(const BenchSpec& spec, std::size_t i);

/// One method's result on one instance.
struct BenchRecord
{
    std::uint64_t instance = 0;
    Eigen::Index n = 0;
    Eigen::Index N = 0;
    Eigen::Index M = 0;     ///< vertices of EW
    Eigen::Index N_W = 0;   ///< generators of EW
    std::string method;
    std::string status;     ///< ok | empty | solver_error | error
    Eigen::Index variables = 0;
    Eigen::Index auxiliary_variables = 0;
    Eigen::Index constraints = 0;
    std::optional<double> volume;
    std::optional<double> r2;     ///< (V_sadraddini / V_min-out)^(1/n), on the sadraddini row
    double wall_ms = 0.0;         ///< not part of the deterministic CSV
};

/// min-out and containment-baseline rows for every instance, ordered by (instance, method).
std::vector<BenchRecord> run_minkdiff_bench(const BenchSpec& spec);

struct ReduceRecord
{
    std::uint64_t instance = 0;
    Eigen::Index n = 0;
    Eigen::Index N = 0;
    double order = 0.0;
    Eigen::Index merge_i = 0;
    Eigen::Index merge_j = 0;
    int sign = 1;
    std::optional<double> volume_before;
    std::optional<double> volume_after;
    std::optional<double> ratio;
    bool contained = true;   ///< support dominance of the reduced set by the original
    std::string status;
    double wall_ms = 0.0;
};

/// One merge per instance; volumes for n <= 4.
std::vector<ReduceRecord> run_reduce_bench(const BenchSpec& spec);

/// Headers are documented in the README. Timing goes to the separate writers.
void write_minkdiff_csv(std::ostream& os, const std::vector<BenchRecord>& rows);
void write_minkdiff_timing_csv(std::ostream& os, const std::vector<BenchRecord>& rows);
void write_reduce_csv(std::ostream& os, const std::vector<ReduceRecord>& rows);
void write_reduce_timing_csv(std::ostream& os, const std::vector<ReduceRecord>& rows);

/// Runs fn(i) for i in [0, count) on `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn);

} // namespace zonoreach

#include "zonoreach/detail/parallel.hpp"

#endif
