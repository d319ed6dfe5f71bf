// zonoreach command-line tool: BRS computation, closed-loop simulation,
// benchmarks and built-in case export.

#include "zonoreach/bench.hpp"
#include "zonoreach/cases.hpp"
#include "zonoreach/control.hpp"
#include "zonoreach/errors.hpp"
#include "zonoreach/problem.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace zonoreach;

namespace
{

enum ExitCode
{
    kOk = 0,
    kError = 1,
    kSchema = 2,
    kEmpty = 3,
    kSolver = 4
};

struct Global
{
    std::uint64_t seed = 0;
    double tol = 1e-7;
    unsigned threads = 1;
    std::string out;
    bool seed_set = false;
    bool tol_set = false;
};

struct ProblemArgs
{
    std::string file;
    std::string case_name;
    Eigen::Index horizon = -1;
    std::string method;
    std::string reduce;
    double max_order = 0.0;
};

void add_problem_options(CLI::App* cmd, ProblemArgs& a)
{
    auto* file = cmd->add_option("--problem", a.file, "Problem JSON file");
    auto* name = cmd->add_option("--case", a.case_name, "Built-in case (lateral, longitudinal, integrator10d)");
    file->excludes(name);
    cmd->add_option("--horizon", a.horizon, "Override the horizon");
    cmd->add_option("--method", a.method, "Under-approximation method: min-out | sadraddini");
    cmd->add_option("--reduce", a.reduce, "Reduction policy: never | always | at_order_threshold");
    cmd->add_option("--max-order", a.max_order, "Order cap used by the reduction policy");
}

Problem resolve_problem(const ProblemArgs& a, const Global& g)
{
    if (a.file.empty() == a.case_name.empty()) throw SchemaError("", "pass exactly one of --problem or --case");
    Problem p = a.file.empty() ? builtin_case(a.case_name) : load_problem(a.file);
    if (a.horizon >= 0) p.horizon = a.horizon;
    if (!a.method.empty()) p.options.method = parse_under_method(a.method);
    if (!a.reduce.empty()) p.options.reduce = parse_reduce_policy(a.reduce);
    if (a.max_order > 0.0)
    {
        p.options.max_order = a.max_order;
        p.options.threshold_order = a.max_order;
    }
    if (g.seed_set) p.options.seed = g.seed;
    if (g.tol_set) p.options.feasibility_tol = g.tol;
    return p;
}

fs::path output_dir(const Global& g, const std::string& fallback)
{
    fs::path dir = g.out.empty() ? fs::path(fallback) : fs::path(g.out);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream of(path);
    if (!of) throw std::runtime_error("cannot write '" + path.string() + "'");
    return of;
}

std::string volume_cell(const Zonotope& Z)
{
    if (Z.num_generators() < Z.dim() || volume_subset_count(Z) > default_config().volume_subset_cap) return "";
    return format_double(volume_exact(Z, default_config().volume_subset_cap));
}

int cmd_brs(const ProblemArgs& args, const Global& g)
{
    const Problem p = resolve_problem(args, g);
    const SystemModel sys = p.model();
    const BrsSequence seq = compute_brs(sys, p.target, p.horizon, p.options.brs_options());
    const fs::path dir = output_dir(g, "brs_out");

    for (std::size_t k = 0; k < std::max(seq.under.size(), seq.over.size()); ++k)
    {
        nlohmann::json step{{"k", k}};
        step["under"] = k < seq.under.size() ? zonotope_to_json(seq.under[k]) : nlohmann::json(nullptr);
        if (k < seq.over.size()) step["over"] = zonotope_to_json(seq.over[k]);
        if (k < seq.diff_under.size()) step["diff_under"] = zonotope_to_json(seq.diff_under[k]);
        open_out(dir / ("step_" + std::to_string(k) + ".json")) << step.dump(2) << '\n';
    }

    auto csv = open_out(dir / "timing.csv");
    csv << "k,under_ms,over_ms,under_order,over_order,reduced,under_volume\n";
    csv << "0,0,0," << format_double(p.target.order()) << ',' << format_double(p.target.order()) << ",0,"
        << volume_cell(p.target) << '\n';
    for (const auto& s : seq.steps)
    {
        const auto k = static_cast<std::size_t>(s.k);
        const bool alive = k < seq.under.size();
        csv << s.k << ',' << format_double(s.under_ms) << ',' << format_double(s.over_ms) << ','
            << (alive ? format_double(s.under_order) : "") << ',' << format_double(s.over_order) << ','
            << (s.reduced ? 1 : 0) << ',' << (alive ? volume_cell(seq.under[k]) : "") << '\n';
    }

    nlohmann::json summary{{"problem", p.name}, {"horizon", p.horizon},
        {"method", to_string(p.options.method)}, {"reduce", to_string(p.options.reduce)},
        {"max_order", format_double(p.options.max_order)},
        {"under_steps", seq.under.size() - 1}, {"over_steps", seq.over.size() - 1}};
    if (seq.empty_from)
    {
        summary["empty_from"] = *seq.empty_from;
        summary["empty_reason"] = seq.empty_reason;
    }
    open_out(dir / "summary.json") << summary.dump(2) << '\n';

    std::cout << "brs: " << seq.under.size() - 1 << "/" << p.horizon << " under steps, output in " << dir.string()
              << '\n';
    if (seq.empty_from)
    {
        std::cerr << "under-approximation empty from step " << *seq.empty_from << ": " << seq.empty_reason << '\n';
        return kEmpty;
    }
    return kOk;
}

int cmd_simulate(const ProblemArgs& args, const Global& g, std::size_t trials, const std::string& policy_name)
{
    const DisturbancePolicy policy = parse_disturbance_policy(policy_name);
    const Problem p = resolve_problem(args, g);
    const SystemModel sys = p.model();
    BrsOptions bo = p.options.brs_options();
    bo.compute_over = false;
    const BrsSequence seq = compute_brs(sys, p.target, p.horizon, bo);
    if (seq.empty_from)
    {
        std::cerr << "under-approximation empty from step " << *seq.empty_from << ": " << seq.empty_reason << '\n';
        return kEmpty;
    }
    const Controller ctrl(sys, seq);
    const fs::path dir = output_dir(g, "simulate_out");

    auto summary = open_out(dir / "summary.csv");
    summary << "trial,success,replay_error\n";
    std::size_t successes = 0;
    auto rng = instance_rng(p.options.seed, 0, 7);
    for (std::size_t t = 0; t < trials; ++t)
    {
        const Vector x0 = sample_in_zonotope(seq.under.back(), rng);
        const Trajectory traj = simulate(ctrl, x0, policy, p.options.seed + t);
        successes += traj.success ? 1 : 0;
        summary << t << ',' << (traj.success ? 1 : 0) << ',' << format_double(traj.replay_error(sys)) << '\n';
        auto tcsv = open_out(dir / ("trajectory_" + std::to_string(t) + ".csv"));
        traj.write_csv(tcsv, p.target);
    }
    std::cout << "simulate: " << successes << "/" << trials << " trajectories reached the target\n";
    return successes == trials ? kOk : kEmpty;
}

void print_minkdiff_summary(const std::vector<BenchRecord>& rows)
{
    std::size_t n = 0, in_band = 0;
    double sum = 0.0;
    for (const auto& r : rows)
    {
        if (!r.r2) continue;
        ++n;
        sum += *r.r2;
        in_band += (*r.r2 >= 0.95 && *r.r2 <= 1.05) ? 1 : 0;
    }
    if (n == 0)
    {
        std::cerr << "minkdiff-bench: no instance with both volumes available\n";
        return;
    }
    std::cerr << "minkdiff-bench: r2 over " << n << " instances: mean " << sum / static_cast<double>(n) << ", "
              << 100.0 * static_cast<double>(in_band) / static_cast<double>(n) << "% in [0.95, 1.05]\n";
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_double(nlohmann::json(item), "list"));
    return out;
}

BenchSpec bench_spec(const std::string& dims, const std::string& orders, std::size_t count, const Global& g)
{
    BenchSpec spec;
    spec.dims.clear();
    for (double d : parse_list(dims)) spec.dims.push_back(static_cast<Eigen::Index>(d));
    spec.orders = parse_list(orders);
    spec.count = count;
    spec.seed = g.seed;
    spec.threads = g.threads;
    return spec;
}

template <typename Rows, typename Main, typename Timing>
void emit_bench(const Rows& rows, const Global& g, Main&& main_writer, Timing&& timing_writer)
{
    if (g.out.empty())
    {
        main_writer(std::cout, rows);
        return;
    }
    const fs::path out(g.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    auto of = open_out(out);
    main_writer(of, rows);
    fs::path timing = out;
    timing.replace_extension(".timing.csv");
    auto tf = open_out(timing);
    timing_writer(tf, rows);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Zonotopic backward reachable sets for uncertain linear systems"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--seed", g.seed, "Random seed")->each([&](const std::string&) { g.seed_set = true; });
    app.add_option("--tol", g.tol, "LP feasibility tolerance")->each([&](const std::string&) { g.tol_set = true; });
    app.add_option("--threads", g.threads, "Worker threads for benchmarks")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output file or directory");

    ProblemArgs brs_args;
    auto* brs = app.add_subcommand("brs", "Compute under/over BRS chains");
    add_problem_options(brs, brs_args);

    ProblemArgs sim_args;
    std::size_t trials = 10;
    std::string policy = "uniform";
    auto* sim = app.add_subcommand("simulate", "Closed-loop simulation with the extracted controller");
    add_problem_options(sim, sim_args);
    sim->add_option("--trials", trials, "Number of trajectories");
    sim->add_option("--policy", policy, "Disturbance policy: uniform | vertex | zero");

    std::string md_dims = "2,3", md_orders = "1,2,3,4,5";
    std::size_t md_count = 100;
    auto* mdb = app.add_subcommand("minkdiff-bench", "Compare min-out with the containment baseline");
    mdb->add_option("--dims", md_dims, "Comma-separated state dimensions");
    mdb->add_option("--orders", md_orders, "Comma-separated template orders");
    mdb->add_option("--count", md_count, "Number of instances");

    std::string rd_dims = "2,3,4", rd_orders = "1.5,2,3,4,5,6,7,8";
    std::size_t rd_count = 200;
    auto* rdb = app.add_subcommand("reduce-bench", "Single-merge order reduction statistics");
    rdb->add_option("--dims", rd_dims, "Comma-separated state dimensions");
    rdb->add_option("--orders", rd_orders, "Comma-separated orders");
    rdb->add_option("--count", rd_count, "Number of instances");

    std::string case_name;
    auto* cs = app.add_subcommand("case", "Write a built-in problem as JSON");
    cs->add_option("name", case_name, "lateral | longitudinal | integrator10d")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*brs) return cmd_brs(brs_args, g);
        if (*sim) return cmd_simulate(sim_args, g, trials, policy);
        if (*mdb)
        {
            const auto rows = run_minkdiff_bench(bench_spec(md_dims, md_orders, md_count, g));
            emit_bench(rows, g, write_minkdiff_csv, write_minkdiff_timing_csv);
            print_minkdiff_summary(rows);
            return kOk;
        }
        if (*rdb)
        {
            const auto rows = run_reduce_bench(bench_spec(rd_dims, rd_orders, rd_count, g));
            emit_bench(rows, g, write_reduce_csv, write_reduce_timing_csv);
            return kOk;
        }
        if (*cs)
        {
            const std::string text = problem_to_json(builtin_case(case_name)).dump(2);
            if (g.out.empty()) std::cout << text << '\n';
            else open_out(g.out) << text << '\n';
            return kOk;
        }
    }
    catch (const SchemaError& e)
    {
        std::cerr << "schema error: " << e.what() << '\n';
        return kSchema;
    }
    catch (const EmptyUnderApprox& e)
    {
        std::cerr << "empty: " << e.what() << '\n';
        return kEmpty;
    }
    catch (const NotInBrs& e)
    {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kEmpty;
    }
    catch (const SolverError& e)
    {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolver;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kSchema;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kOk;
}
