#include "zonoreach/bench.hpp"
#include "zonoreach/errors.hpp"
#include "zonoreach/minkdiff.hpp"
#include "zonoreach/problem.hpp"
#include "zonoreach/reduction.hpp"

#include <Eigen/SVD>

#include <chrono>
#include <cmath>

namespace zonoreach
{

namespace
{

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

Matrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix M(rows, cols);
    // Column-major fill keeps the draw order independent of Eigen internals.
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
    return M;
}

Eigen::Index generator_count(Eigen::Index n, double order)
{
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(order * static_cast<double>(n))));
}

std::string opt(const std::optional<double>& x)
{
    return x ? format_double(*x) : std::string();
}

std::optional<double> try_volume(const Zonotope& Z, std::size_t cap)
{
    if (volume_subset_count(Z) > cap) return std::nullopt;
    return volume_exact(Z, cap);
}

} // namespace

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t id, std::uint64_t salt)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32), static_cast<std::uint32_t>(salt)};
    return std::mt19937_64(seq);
}

Zonotope random_zonotope(std::uint64_t seed, std::uint64_t id, Eigen::Index n, Eigen::Index N)
{
    auto rng = instance_rng(seed, id, 1);
    return Zonotope(gaussian(rng, n, N), Vector::Zero(n));
}

DiffInstance random_diff_instance(std::uint64_t seed, std::uint64_t id, Eigen::Index n, double order)
{
    auto rng = instance_rng(seed, id, 2);
    DiffInstance inst;
    inst.id = id;
    const Eigen::Index N = generator_count(n, order);
    if (N < n) throw std::invalid_argument("random_diff_instance: order must be at least 1");
    Matrix G = gaussian(rng, n, N);
    const double mean_norm = G.colwise().norm().mean();
    inst.Z = Zonotope(std::move(G), Vector::Zero(n));

    std::uniform_real_distribution<double> radius(0.05, 0.3);
    Vector r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = radius(rng) * mean_norm;
    inst.W = Box(-r, r);

    for (int attempt = 0;; ++attempt)
    {
        Matrix E = Matrix::Identity(n, n) + 0.1 * gaussian(rng, n, n);
        Eigen::JacobiSVD<Matrix> svd(E);
        const Vector s = svd.singularValues();
        if (s(n - 1) > 0.0 && s(0) / s(n - 1) <= 10.0)
        {
            inst.E = std::move(E);
            break;
        }
        if (attempt > 1000) throw std::runtime_error("random_diff_instance: could not draw a well-conditioned E");
    }

    // Shrink W until EW sits in half the parallelotope P of the first n
    // generators: P is inside Z, so both difference LPs stay feasible.
    const Matrix P = inst.Z.generators().leftCols(n);
    const Matrix coords = P.fullPivLu().solve(inst.E * Matrix(r.asDiagonal()));
    const double reach = coords.cwiseAbs().rowwise().sum().maxCoeff();
    if (reach > 0.5)
    {
        r *= 0.5 / reach;
        inst.W = Box(-r, r);
    }
    return inst;
}

DiffInstance random_box_instance(std::uint64_t seed, std::uint64_t id, Eigen::Index n)
{
    auto rng = instance_rng(seed, id, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector r(n), c(n), rho(n), cw(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        r(i) = 0.5 + 1.5 * unit(rng);
        c(i) = normal(rng);
        rho(i) = 0.9 * unit(rng) * r(i);
        cw(i) = 0.2 * (unit(rng) - 0.5) * r(i);
    }
    DiffInstance inst;
    inst.id = id;
    inst.Z = Zonotope(Matrix(r.asDiagonal()), c);
    inst.E = Matrix::Identity(n, n);
    inst.W = Box(cw - rho, cw + rho);
    return inst;
}

std::pair<Eigen::Index, double> bench_shape(const BenchSpec& spec, std::size_t i)
{
    if (spec.dims.empty() || spec.orders.empty()) throw std::invalid_argument("bench: dims and orders must be non-empty");
    const std::size_t nd = spec.dims.size();
    return {spec.dims[i % nd], spec.orders[(i / nd) % spec.orders.size()]};
}

std::vector<BenchRecord> run_minkdiff_bench(const BenchSpec& spec)
{
    for (Eigen::Index n : spec.dims)
        if (n < 1 || n > 10) throw std::invalid_argument("minkdiff bench: dimensions must lie in [1, 10]");
    for (double o : spec.orders)
        if (o < 1.0) throw std::invalid_argument("minkdiff bench: orders must be at least 1");

    std::vector<BenchRecord> rows(2 * spec.count);
    parallel_for(spec.count, spec.threads, [&](std::size_t i) {
        const auto [n, order] = bench_shape(spec, i);
        const DiffInstance inst = random_diff_instance(spec.seed, i, n, order);
        const DisturbanceSet W = DisturbanceSet::from_box(inst.W);
        const ImageSet EW = image_of(inst.E, W);

        BenchRecord base;
        base.instance = i;
        base.n = n;
        base.N = inst.Z.num_generators();
        base.M = EW.vrep.num_vertices();
        base.N_W = EW.zono->num_generators();

        BenchRecord mo = base;
        mo.method = "min-out";
        mo.variables = min_out_variable_count(base.N, base.M, n);
        mo.constraints = n * base.M + 2 * base.N * base.M;
        auto start = std::chrono::steady_clock::now();
        try
        {
            const ScaledTemplate t = outer_approx_min_out(inst.Z, EW.vrep, default_b_weights(inst.Z, inst.E));
            mo.wall_ms = elapsed_ms(start);
            mo.variables = t.size.variables;
            mo.constraints = t.size.constraints();
            mo.volume = try_volume(aligned_diff(inst.Z, t.alpha, t.center), spec.volume_cap);
            mo.status = "ok";
        }
        catch (const EmptyUnderApprox&)
        {
            mo.status = "empty";
        }
        catch (const SolverError&)
        {
            mo.status = "solver_error";
        }
        if (mo.wall_ms == 0.0) mo.wall_ms = elapsed_ms(start);

        BenchRecord sa = base;
        sa.method = "sadraddini";
        sa.variables = sadraddini_variable_count(base.N, base.N_W, n);
        start = std::chrono::steady_clock::now();
        try
        {
            const ScaledTemplate t = under_approx_sadraddini(inst.Z, *EW.zono);
            sa.wall_ms = elapsed_ms(start);
            sa.variables = t.size.variables;
            sa.auxiliary_variables = t.size.auxiliary_variables;
            sa.constraints = t.size.constraints();
            sa.volume = try_volume(t.zonotope(), spec.volume_cap);
            sa.status = "ok";
        }
        catch (const EmptyUnderApprox&)
        {
            sa.status = "empty";
        }
        catch (const SolverError&)
        {
            sa.status = "solver_error";
        }
        if (sa.wall_ms == 0.0) sa.wall_ms = elapsed_ms(start);

        if (mo.volume && sa.volume && *mo.volume > 0.0)
            sa.r2 = std::pow(*sa.volume / *mo.volume, 1.0 / static_cast<double>(n));

        rows[2 * i] = std::move(mo);
        rows[2 * i + 1] = std::move(sa);
    });
    return rows;
}

std::vector<ReduceRecord> run_reduce_bench(const BenchSpec& spec)
{
    for (double o : spec.orders)
        if (o < 1.0) throw std::invalid_argument("reduce bench: orders must be at least 1");
    std::vector<ReduceRecord> rows(spec.count);
    parallel_for(spec.count, spec.threads, [&](std::size_t i) {
        const auto [n, order] = bench_shape(spec, i);
        ReduceRecord rec;
        rec.instance = i;
        rec.n = n;
        rec.order = order;
        const Zonotope Z = random_zonotope(spec.seed, i, n, generator_count(n, order));
        rec.N = Z.num_generators();
        if (rec.N < 2)
        {
            rec.status = "skipped";
            rows[i] = rec;
            return;
        }
        const auto start = std::chrono::steady_clock::now();
        auto [R, merge] = reduce_once(Z);
        rec.wall_ms = elapsed_ms(start);
        rec.merge_i = merge.i;
        rec.merge_j = merge.j;
        rec.sign = merge.sign;
        rec.contained = support_dominates(R, Z, 64 * static_cast<std::size_t>(n), spec.seed ^ (i + 1)).holds;
        if (n <= 4)
        {
            rec.volume_before = try_volume(Z, spec.volume_cap);
            rec.volume_after = try_volume(R, spec.volume_cap);
            if (rec.volume_before && rec.volume_after && *rec.volume_before > 0.0)
                rec.ratio = *rec.volume_after / *rec.volume_before;
        }
        rec.status = "ok";
        rows[i] = std::move(rec);
    });
    return rows;
}

void write_minkdiff_csv(std::ostream& os, const std::vector<BenchRecord>& rows)
{
    os << "instance,n,N,M,N_W,method,status,variables,aux_variables,constraints,volume,r2\n";
    for (const auto& r : rows)
    {
        os << r.instance << ',' << r.n << ',' << r.N << ',' << r.M << ',' << r.N_W << ',' << r.method << ','
           << r.status << ',' << r.variables << ',' << r.auxiliary_variables << ',' << r.constraints << ','
           << opt(r.volume) << ',' << opt(r.r2) << '\n';
    }
}

void write_minkdiff_timing_csv(std::ostream& os, const std::vector<BenchRecord>& rows)
{
    os << "instance,method,wall_ms\n";
    for (const auto& r : rows) os << r.instance << ',' << r.method << ',' << format_double(r.wall_ms) << '\n';
}

void write_reduce_csv(std::ostream& os, const std::vector<ReduceRecord>& rows)
{
    os << "instance,n,N,order,merge_i,merge_j,sign,volume_before,volume_after,ratio,contained,status\n";
    for (const auto& r : rows)
    {
        os << r.instance << ',' << r.n << ',' << r.N << ',' << format_double(r.order) << ',' << r.merge_i << ','
           << r.merge_j << ',' << r.sign << ',' << opt(r.volume_before) << ',' << opt(r.volume_after) << ','
           << opt(r.ratio) << ',' << (r.contained ? 1 : 0) << ',' << r.status << '\n';
    }
}

void write_reduce_timing_csv(std::ostream& os, const std::vector<ReduceRecord>& rows)
{
    os << "instance,N,wall_ms\n";
    for (const auto& r : rows) os << r.instance << ',' << r.N << ',' << format_double(r.wall_ms) << '\n';
}

} // namespace zonoreach
