// Acceptance suite: one PASS/FAIL line per criterion.
//
//   zonoreach_acceptance            run everything
//   zonoreach_acceptance 4          run criterion 4 only
//   zonoreach_acceptance integrator-closed-loop
#include "oracles.hpp"

#include "zonoreach/bench.hpp"
#include "zonoreach/brs.hpp"
#include "zonoreach/cases.hpp"
#include "zonoreach/control.hpp"
#include "zonoreach/errors.hpp"
#include "zonoreach/minkdiff.hpp"
#include "zonoreach/reduction.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

using namespace zonoreach;

namespace
{

constexpr std::uint64_t kSeed = 20240601;

struct Verdict
{
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 4)
{
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

/// Largest coordinate mismatch between Z's bounding box and the interval box [lo, hi].
double box_error(const Zonotope& Z, const Vector& lo, const Vector& hi)
{
    auto [zlo, zhi] = Z.bounding_box();
    return std::max((zlo - lo).cwiseAbs().maxCoeff(), (zhi - hi).cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------

Verdict box_exactness()
{
    const auto t0 = Clock::now();
    double worst = 0.0;
    int failures = 0;
    for (std::uint64_t id = 0; id < 200; ++id)
    {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(id % 6);
        const DiffInstance inst = random_box_instance(kSeed, id, n);
        const ImageSet EW = image_of(inst.E, DisturbanceSet::from_box(inst.W));

        // Interval erosion per axis.
        auto [zlo, zhi] = inst.Z.bounding_box();
        const Vector lo = zlo - inst.W.lower, hi = zhi - inst.W.upper;
        try
        {
            const DiffResult d = sandwich_diff(inst.Z, inst.E, EW);
            const Zonotope sa = under_approx_sadraddini(inst.Z, *EW.zono).zonotope();
            worst = std::max({worst, box_error(d.under, lo, hi), box_error(d.over, lo, hi), box_error(sa, lo, hi)});
        }
        catch (const std::exception& e)
        {
            ++failures;
            std::cerr << "instance " << id << ": " << e.what() << '\n';
        }
    }
    const double secs = seconds_since(t0);
    return {failures == 0 && worst <= 1e-6 && secs < 10.0,
        "200 box instances, n in 1..6: max component error " + fmt(worst) + " (tol 1e-6), " +
            std::to_string(failures) + " failures, " + fmt(secs, 3) + " s (limit 10 s)"};
}

Verdict sandwich_certificates()
{
    const auto t0 = Clock::now();
    int bad_a = 0, bad_b = 0, bad_c = 0, bad_d = 0, errors = 0;
    for (std::uint64_t id = 0; id < 500; ++id)
    {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(id % 5);
        const double order = 1.0 + static_cast<double>((id / 5) % 6);
        const DiffInstance inst = random_diff_instance(kSeed, id, n, order);
        const ImageSet EW = image_of(inst.E, DisturbanceSet::from_box(inst.W));
        try
        {
            const DiffResult d = sandwich_diff(inst.Z, inst.E, EW);
            const Zonotope outer = d.outer_template.zonotope();
            for (Eigen::Index j = 0; j < EW.vrep.num_vertices(); ++j)
                if (!contains_point(outer, EW.vrep.vertices.col(j), 1e-7))
                {
                    ++bad_a;
                    break;
                }
            if (!max_in_certificate(d.inner_template, *EW.hrep, 1e-7)) ++bad_b;
            if (!support_dominates(d.under, d.over, 256, id)) ++bad_c;
            for (const auto& l : sample_directions(n, 256, id + 1))
            {
                const double h_ew = (l.transpose() * EW.vrep.vertices).maxCoeff();
                if (support(d.under, l) > support(inst.Z, l) - h_ew + 1e-7)
                {
                    ++bad_d;
                    break;
                }
            }
        }
        catch (const std::exception& e)
        {
            ++errors;
            std::cerr << "instance " << id << ": " << e.what() << '\n';
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = bad_a + bad_b + bad_c + bad_d + errors == 0 && secs < 120.0;
    return {ok, "500 random instances: vertex-cover misses " + std::to_string(bad_a) + ", H-rep certificate misses " +
                    std::to_string(bad_b) + ", dominance misses " + std::to_string(bad_c) + ", support-bound misses " +
                    std::to_string(bad_d) + ", errors " + std::to_string(errors) + ", " + fmt(secs, 3) +
                    " s (limit 120 s)"};
}

Verdict problem_sizes()
{
    // Exact counts on generated instances.
    int mismatches = 0, checked = 0;
    for (std::uint64_t id = 0; id < 60; ++id)
    {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(id % 4);
        const DiffInstance inst = random_diff_instance(kSeed + 3, id, n, 1.0 + static_cast<double>(id % 5));
        const ImageSet EW = image_of(inst.E, DisturbanceSet::from_box(inst.W));
        const Eigen::Index N = inst.Z.num_generators(), M = EW.vrep.num_vertices(), NW = EW.zono->num_generators();
        try
        {
            const ScaledTemplate mo = outer_approx_min_out(inst.Z, EW.vrep, default_b_weights(inst.Z, inst.E));
            mismatches += mo.size.variables == N * M + N + n ? 0 : 1;
            ++checked;
        }
        catch (const EmptyUnderApprox&)
        {
        }
        const ScaledTemplate sa = under_approx_sadraddini(inst.Z, *EW.zono);
        mismatches += sa.size.variables == N * (N + NW) + 2 * N + n ? 0 : 1;
        ++checked;
    }

    // Scaling probe: n = 4, M = 16 (4D box), N_W = 4, N doubling from 8 to 64.
    std::vector<double> mo_vars, sa_vars;
    const Box W(Vector::Constant(4, -0.01), Vector::Constant(4, 0.01));
    const ImageSet EW = image_of(Matrix::Identity(4, 4), DisturbanceSet::from_box(W));
    for (Eigen::Index N : {8, 16, 32, 64})
    {
        const Zonotope Z = random_zonotope(kSeed, static_cast<std::uint64_t>(N), 4, N);
        const ScaledTemplate mo = outer_approx_min_out(Z, EW.vrep, default_b_weights(Z, Matrix::Identity(4, 4)));
        const ScaledTemplate sa = under_approx_sadraddini(Z, *EW.zono);
        mismatches += mo.size.variables == N * 16 + N + 4 ? 0 : 1;
        mismatches += sa.size.variables == N * (N + 4) + 2 * N + 4 ? 0 : 1;
        mo_vars.push_back(static_cast<double>(mo.size.variables));
        sa_vars.push_back(static_cast<double>(sa.size.variables));
    }
    bool linear = true, faster = true;
    std::string factors;
    double last_relative = 0.0;
    for (std::size_t i = 1; i < mo_vars.size(); ++i)
    {
        const double fm = mo_vars[i] / mo_vars[i - 1], fs = sa_vars[i] / sa_vars[i - 1];
        linear = linear && fm >= 1.9 && fm <= 2.1;
        faster = faster && fs > fm;
        last_relative = fs / fm;
        factors += " " + fmt(fm, 3) + "/" + fmt(fs, 3);
    }
    const bool ok = mismatches == 0 && linear && faster && last_relative >= 1.8;
    return {ok, std::to_string(checked) + " formula checks, " + std::to_string(mismatches) +
                    " mismatches; per-doubling growth min-out/containment:" + factors +
                    "; last relative growth " + fmt(last_relative, 3) + " (need >= 1.8)"};
}

Verdict volume_ratio()
{
    BenchSpec spec;
    spec.dims = {2, 3, 4};
    spec.orders = {1, 2, 3, 4, 5};
    spec.count = 300;
    spec.seed = kSeed;
    spec.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto rows = run_minkdiff_bench(spec);
    std::vector<double> r2;
    for (const auto& r : rows)
        if (r.r2) r2.push_back(*r.r2);
    double mean = 0.0;
    std::size_t inside = 0;
    for (double r : r2)
    {
        mean += r;
        inside += (r >= 0.8 && r <= 1.3) ? 1 : 0;
    }
    const bool have = r2.size() >= 300;
    mean = r2.empty() ? 0.0 : mean / static_cast<double>(r2.size());
    const double frac = r2.empty() ? 0.0 : static_cast<double>(inside) / static_cast<double>(r2.size());
    const bool ok = have && mean >= 0.85 && mean <= 1.10 && frac >= 0.85;
    return {ok, std::to_string(r2.size()) + " ratios (need >= 300): mean " + fmt(mean) +
                    " (band [0.85, 1.10]), " + fmt(100.0 * frac) + "% in [0.8, 1.3] (need >= 85%)"};
}

Verdict reduction_quality()
{
    const auto t0 = Clock::now();
    const std::vector<double> orders{1.5, 2, 3, 4, 5, 6, 8};
    std::size_t violations = 0;
    double low_sum = 0.0, high_sum = 0.0;
    int low_n = 0, high_n = 0;
    for (std::uint64_t id = 0; id < 2000; ++id)
    {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(id % 3);
        const double order = orders[(id / 3) % orders.size()];
        const auto N = static_cast<Eigen::Index>(std::llround(order * static_cast<double>(n)));
        const Zonotope Z = random_zonotope(kSeed + 5, id, n, N);
        auto [R, merge] = reduce_once(Z);
        if (!support_dominates(R, Z, 256, id)) ++violations;
        const double ratio = volume_exact(R) / volume_exact(Z);
        if (order == 1.5)
        {
            low_sum += ratio;
            ++low_n;
        }
        else if (order >= 4)
        {
            high_sum += ratio;
            ++high_n;
        }
    }
    const double low = low_sum / low_n, high = high_sum / high_n;
    const double secs = seconds_since(t0);
    const bool ok = violations == 0 && high >= 0.9 && high > low && secs < 180.0;
    return {ok, "2000 merges: " + std::to_string(violations) + " dominance violations; mean ratio at order >= 4 " +
                    fmt(high) + " (need >= 0.9), at order 1.5 " + fmt(low) + ", " + fmt(secs, 3) +
                    " s (limit 180 s)"};
}

Verdict interval_oracle()
{
    double worst = 0.0;

    // Scalar chain.
    {
        const auto box1 = [](double lo, double hi) { return Box(Vector::Constant(1, lo), Vector::Constant(1, hi)); };
        const SystemModel sys(Matrix::Identity(1, 1), Matrix::Identity(1, 1), Matrix::Identity(1, 1), Vector::Zero(1),
            box1(-1, 1).to_zonotope(), DisturbanceSet::from_box(box1(-0.1, 0.1)));
        const BrsSequence seq = compute_brs(sys, box1(-1, 1).to_zonotope(), 3);
        const double expected[] = {1.0, 1.9, 2.8, 3.7};
        if (seq.under.size() != 4) return {false, "scalar chain truncated"};
        for (std::size_t k = 0; k < 4; ++k)
        {
            const Vector r = Vector::Constant(1, expected[k]);
            worst = std::max({worst, box_error(seq.under[k], -r, r), box_error(seq.over[k], -r, r)});
        }
    }

    // Decoupled 2D system: each axis follows its own interval recursion.
    Vector a(2), b(2), u_lo(2), u_hi(2), w_lo(2), w_hi(2), K(2);
    a << 1.1, 0.9;
    b << 1.0, 0.5;
    u_lo << -0.5, -1.0;
    u_hi << 0.5, 0.6;
    w_lo << -0.05, -0.1;
    w_hi << 0.08, 0.1;
    K << 0.02, -0.03;
    const SystemModel sys(Matrix(a.asDiagonal()), Matrix(b.asDiagonal()), Matrix::Identity(2, 2), K,
        Box(u_lo, u_hi).to_zonotope(), DisturbanceSet::from_box(Box(w_lo, w_hi)));
    Vector lo(2), hi(2);
    lo << -1, -0.5;
    hi << 1, 1.5;
    const Eigen::Index steps = 8;
    const BrsSequence seq = compute_brs(sys, Box(lo, hi).to_zonotope(), steps);
    if (static_cast<Eigen::Index>(seq.under.size()) != steps + 1) return {false, "2D chain truncated"};
    for (Eigen::Index k = 0; k <= steps; ++k)
    {
        const auto kk = static_cast<std::size_t>(k);
        worst = std::max({worst, box_error(seq.under[kk], lo, hi), box_error(seq.over[kk], lo, hi)});
        for (Eigen::Index i = 0; i < 2; ++i)
        {
            oracle::Interval r = oracle::erode({lo(i), hi(i)}, {w_lo(i), w_hi(i)});
            r = oracle::dilate(r, {-b(i) * u_hi(i), -b(i) * u_lo(i)});
            lo(i) = (r.lo - K(i)) / a(i);
            hi(i) = (r.hi - K(i)) / a(i);
        }
    }
    return {worst <= 1e-9, "scalar and decoupled 2D chains: max interval error " + fmt(worst) + " (tol 1e-9)"};
}

/// Least-squares slope of log(ms) against log(k).
double loglog_slope(const std::vector<BrsStepInfo>& steps, Eigen::Index from)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& s : steps)
    {
        if (s.k < from || s.under_ms <= 0.0) continue;
        const double x = std::log(static_cast<double>(s.k)), y = std::log(s.under_ms);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 3) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

Verdict aircraft_soundness()
{
    bool ok = true;
    std::string detail;
    for (const std::string name : {"lateral", "longitudinal"})
    {
        const Problem p = builtin_case(name);
        const SystemModel sys = p.model();
        BrsOptions opts = p.options.brs_options();
        opts.compute_over = false;

        const BrsSequence seq = compute_brs(sys, p.target, 20, opts);
        const Controller ctrl(sys, seq);
        std::mt19937_64 rng(kSeed);
        std::string part = name + ":";
        for (Eigen::Index k : {5, 10, 20})
        {
            if (k >= static_cast<Eigen::Index>(seq.under.size()))
            {
                ok = false;
                part += " k=" + std::to_string(k) + " unavailable (under chain empty from k=" +
                        std::to_string(*seq.empty_from) + ");";
                continue;
            }
            int feasible = 0;
            for (int s = 0; s < 500; ++s)
            {
                // Mostly interior parameter samples plus some extreme points.
                const Zonotope& Zk = seq.under[static_cast<std::size_t>(k)];
                const Vector x = s < 450 ? sample_in_zonotope(Zk, rng) : sample_zonotope_corner(Zk, rng);
                try
                {
                    one_step_input(x, k - 1, ctrl);
                    ++feasible;
                }
                catch (const NotInBrs&)
                {
                }
            }
            ok = ok && feasible == 500;
            part += " k=" + std::to_string(k) + " " + std::to_string(feasible) + "/500;";
        }

        // Full horizon with timing.
        try
        {
            const BrsSequence full = compute_brs(sys, p.target, 50, opts);
            if (full.empty_from)
            {
                ok = false;
                part += " 50-step run: under chain empty from k=" + std::to_string(*full.empty_from) + " (" +
                        full.empty_reason + ");";
            }
            else
            {
                part += " 50-step run complete;";
            }
            const double slope = loglog_slope(full.steps, 5);
            ok = ok && slope <= 2.0;
            part += " step-time log-log slope " + fmt(slope, 3) + " (limit 2)";
        }
        catch (const std::exception& e)
        {
            ok = false;
            part += std::string(" 50-step run failed: ") + e.what();
        }
        detail += (detail.empty() ? "" : " | ") + part;
    }
    return {ok, detail};
}

/// Closed-loop trials from under[K]; counts successes and soundness violations.
std::string closed_loop(const SystemModel& sys, const BrsSequence& seq, int trials, bool& ok)
{
    const Controller ctrl(sys, seq);
    std::string out;
    for (auto policy : {DisturbancePolicy::kUniform, DisturbancePolicy::kVertex})
    {
        std::mt19937_64 rng(kSeed + static_cast<int>(policy));
        int success = 0, violations = 0;
        for (int t = 0; t < trials; ++t)
        {
            const Vector x0 = sample_in_zonotope(seq.under.back(), rng);
            try
            {
                const Trajectory traj = simulate(ctrl, x0, policy, kSeed + static_cast<std::uint64_t>(t));
                success += traj.success && traj.replay_error(sys) <= 1e-9 ? 1 : 0;
            }
            catch (const NotInBrs&)
            {
                ++violations;
            }
        }
        ok = ok && success == trials;
        out += " " + to_string(policy) + " " + std::to_string(success) + "/" + std::to_string(trials) +
               (violations ? " (" + std::to_string(violations) + " soundness violations)" : "") + ";";
    }
    return out;
}

Verdict integrator_reachability()
{
    const auto t0 = Clock::now();
    const Problem p = builtin_case("integrator10d");
    const SystemModel sys = p.model();
    BrsOptions opts = p.options.brs_options();
    opts.compute_over = false;
    const BrsSequence seq = compute_brs(sys, p.target, 50, opts);
    if (seq.empty_from)
        return {false, "under chain empty from k=" + std::to_string(*seq.empty_from) + " (" + seq.empty_reason +
                           "); no 50-step controller to simulate"};
    bool ok = true;
    const std::string detail = closed_loop(sys, seq, 100, ok);
    const double secs = seconds_since(t0);
    return {ok && secs < 300.0, "horizon 50:" + detail + " " + fmt(secs, 3) + " s (limit 300 s)"};
}

Verdict integrator_supported_horizon()
{
    const Problem p = builtin_case("integrator10d");
    const SystemModel sys = p.model();
    BrsOptions opts = p.options.brs_options();
    opts.compute_over = false;
    const BrsSequence seq = compute_brs(sys, p.target, 50, opts);
    const Eigen::Index K = seq.horizon();
    if (K == 0) return {false, "no step supported"};
    bool ok = true;
    const std::string detail = closed_loop(sys, seq, 100, ok);
    return {ok, "longest supported horizon K=" + std::to_string(K) + ":" + detail};
}

Verdict determinism()
{
    BenchSpec spec;
    spec.count = 40;
    spec.seed = kSeed;
    auto minkdiff = [&](unsigned threads) {
        spec.threads = threads;
        std::ostringstream os;
        write_minkdiff_csv(os, run_minkdiff_bench(spec));
        return os.str();
    };
    auto reduce = [&](unsigned threads) {
        spec.threads = threads;
        std::ostringstream os;
        write_reduce_csv(os, run_reduce_bench(spec));
        return os.str();
    };
    const std::string m1 = minkdiff(1), m2 = minkdiff(1), m4 = minkdiff(4);
    const std::string r1 = reduce(1), r2 = reduce(1), r4 = reduce(4);
    const bool ok = m1 == m2 && m1 == m4 && r1 == r2 && r1 == r4;
    return {ok, std::string("minkdiff-bench ") + (m1 == m2 && m1 == m4 ? "identical" : "differs") +
                    " across repeats and thread counts, reduce-bench " +
                    (r1 == r2 && r1 == r4 ? "identical" : "differs") + " (" + std::to_string(m1.size() + r1.size()) +
                    " bytes compared)"};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::pair<std::string, std::function<Verdict()>>>> criteria{
        {"1", {"box exactness", box_exactness}},
        {"2", {"sandwich certificates", sandwich_certificates}},
        {"3", {"problem-size formulas", problem_sizes}},
        {"4", {"volume-ratio reproduction", volume_ratio}},
        {"5", {"order-reduction soundness and quality", reduction_quality}},
        {"6", {"BRS interval oracle", interval_oracle}},
        {"7", {"BRS soundness sampling", aircraft_soundness}},
        {"8", {"closed-loop reachability", integrator_reachability}},
        {"9", {"determinism", determinism}},
        {"integrator-closed-loop", {"closed loop at the supported horizon", integrator_supported_horizon}},
    };

    const std::string only = argc > 1 ? argv[1] : "";
    bool all_ok = true;
    bool ran = false;
    for (const auto& [id, entry] : criteria)
    {
        if (!only.empty() && only != id) continue;
        if (only.empty() && id == "integrator-closed-loop") continue;
        ran = true;
        Verdict v;
        try
        {
            v = entry.second();
        }
        catch (const std::exception& e)
        {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << "  [" << id << "] " << entry.first << ": " << v.detail << std::endl;
        all_ok = all_ok && v.pass;
    }
    if (!ran)
    {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 2;
    }
    return all_ok ? 0 : 1;
}
