// Command-line front end: problem generation, single solves, rate
// certification, benchmarking, the phantom reconstruction demo and the
// property-suite gate. Numeric work lives in the headers; this file only
// parses flags and moves data between files and the library.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mxsketch/mxsketch.hpp"

namespace {

using namespace mxsketch;

constexpr const char* kMethodList =
    "general, grk, grbk, rk-a, rk-b, cd-pd, rcd, gauss-grk, gauss-rk-a, gauss-rk-b";
constexpr const char* kSketchList = "coord, row, col, identity, block, gauss";

const std::vector<std::string> kMethodIds = {"general",   "grk",        "grbk",      "rk-a",
                                             "rk-b",      "cd-pd",      "rcd",       "gauss-grk",
                                             "gauss-rk-a", "gauss-rk-b"};
const std::vector<std::string> kSketchIds = {"coord", "row", "col", "identity", "block", "gauss"};

// Flags shared by the subcommands that need a problem instance.
struct ProblemFlags {
    std::vector<std::int64_t> type1;  // p m r1 n q r2
    std::vector<std::int64_t> type2;  // p m n q
    std::int64_t phantom_n = 0;
    std::int64_t rows_p = 0, cols_q = 0;  // sensing dims for --phantom
    std::string a_path, b_path, c_path, xstar_path, g_path;

    void add_to(CLI::App* cmd, bool with_files) {
        cmd->add_option("--type1", type1,
                        "rank-controlled problem: p m r1 n q r2 (A is p x m with rank r1 and "
                        "singular values in (1,2); B is n x q with rank r2)")
            ->expected(6);
        cmd->add_option("--type2", type2, "standard normal problem: p m n q")->expected(4);
        cmd->add_option("--phantom", phantom_n,
                        "phantom reconstruction problem of the given image size N");
        cmd->add_option("--p", rows_p, "rows of A for --phantom (default 2N)");
        cmd->add_option("--q", cols_q, "cols of B for --phantom (default 2N)");
        if (with_files) {
            cmd->add_option("--a", a_path, "A as a Matrix Market file");
            cmd->add_option("--b", b_path, "B as a Matrix Market file");
            cmd->add_option("--c", c_path, "C as a Matrix Market file (default A*Xstar*B)");
            cmd->add_option("--xstar", xstar_path,
                            "known solution as a Matrix Market file (default all-ones)");
            cmd->add_option("--g", g_path, "SPD weight G as a Matrix Market file (default I)");
        }
    }

    int sources() const {
        return int(!type1.empty()) + int(!type2.empty()) + int(phantom_n > 0) +
               int(!a_path.empty() || !b_path.empty());
    }

    MatrixEquation build(std::uint64_t seed) const {
        if (sources() != 1)
            throw std::invalid_argument(
                "choose exactly one problem source: --type1, --type2, --phantom, or --a/--b");
        std::optional<SpdMat> g;
        if (!g_path.empty()) g = SpdMat(load_matrix_market(g_path).matrix);

        if (!a_path.empty() || !b_path.empty()) {
            if (a_path.empty() || b_path.empty())
                throw std::invalid_argument("--a and --b must be given together");
            const Matrix a = load_matrix_market(a_path).matrix;
            const Matrix b = load_matrix_market(b_path).matrix;
            std::optional<Matrix> xstar;
            if (!xstar_path.empty()) xstar = load_matrix_market(xstar_path).matrix;
            if (!c_path.empty()) {
                const Matrix c = load_matrix_market(c_path).matrix;
                return MatrixEquation(a, b, c, xstar, g);
            }
            Matrix xs = xstar ? *xstar : Matrix::Ones(a.cols(), b.rows());
            return MatrixEquation(a, b, Matrix(a * xs * b), xs, g);
        }

        Rng rng(derive_seed(seed, 0));
        if (!type1.empty()) {
            const auto pr = gen_type1(type1[0], type1[1], type1[2], type1[3], type1[4], type1[5], rng);
            return with_weight(assemble(pr.A, pr.B), g);
        }
        if (!type2.empty()) {
            const auto pr = gen_type2(type2[0], type2[1], type2[2], type2[3], rng);
            return with_weight(assemble(pr.A, pr.B), g);
        }
        const Index n = phantom_n;
        const Index p = rows_p > 0 ? rows_p : 2 * n;
        const Index q = cols_q > 0 ? cols_q : 2 * n;
        const auto pr = gen_type2(p, n, n, q, rng);
        return with_weight(assemble(pr.A, pr.B, std::optional<Matrix>(phantom(n))), g);
    }

    static MatrixEquation with_weight(MatrixEquation eq, const std::optional<SpdMat>& g) {
        if (!g) return eq;
        return MatrixEquation(eq.A, eq.B, eq.C, eq.Xstar, *g);
    }
};

SketchSpec spec_from_kind(const std::string& kind, Index tau1, Index tau2) {
    if (kind == "coord") return CoordinatePair{};
    if (kind == "row") return RowOnly{};
    if (kind == "col") return ColOnly{};
    if (kind == "identity") return IdentityPair{};
    if (kind == "block") return BlockPartition{tau1, tau2};
    if (kind == "gauss") return GaussianPair{};
    throw std::invalid_argument("unknown sketch kind: " + kind);
}

SketchSpec load_sketch_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sketch file " + path);
    nlohmann::json j;
    in >> j;
    return j.get<SketchSpec>();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<Method> parse_methods(const std::vector<std::string>& ids) {
    std::vector<Method> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(method_from_string(id));
    return out;
}

// --- subcommand drivers ------------------------------------------------------

int run_gen(const ProblemFlags& pf, std::uint64_t seed, const std::string& out_dir) {
    const MatrixEquation eq = pf.build(seed);
    std::filesystem::create_directories(out_dir);
    const auto path = [&out_dir](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    save_matrix_market(path("A.mtx"), eq.A);
    save_matrix_market(path("B.mtx"), eq.B);
    save_matrix_market(path("C.mtx"), eq.C);
    if (eq.Xstar) save_matrix_market(path("Xstar.mtx"), *eq.Xstar);

    nlohmann::json meta;
    meta["seed"] = seed;
    meta["p"] = eq.p();
    meta["m"] = eq.m();
    meta["n"] = eq.n();
    meta["q"] = eq.q();
    if (!pf.type1.empty()) meta["kind"] = "type1";
    if (!pf.type2.empty()) meta["kind"] = "type2";
    if (pf.phantom_n > 0) meta["kind"] = "phantom";
    if (!pf.a_path.empty()) meta["kind"] = "external";
    write_text_file(path("problem.json"), meta.dump(2) + "\n");

    std::cout << "wrote A.mtx (" << eq.p() << "x" << eq.m() << "), B.mtx (" << eq.n() << "x"
              << eq.q() << "), C.mtx" << (eq.Xstar ? ", Xstar.mtx" : "") << ", problem.json to "
              << out_dir << "\n";
    return 0;
}

int run_solve(const ProblemFlags& pf, const std::string& method_id, const std::string& sketch_id,
              const std::string& sketch_file, std::uint64_t seed, Index max_iters, double tol,
              Index tau1, Index tau2, Index trace_stride, double time_budget,
              const std::string& out_path, const std::string& format) {
    const MatrixEquation eq = pf.build(seed);
    const Method method = method_from_string(method_id);

    SketchSpec spec;
    if (!sketch_file.empty())
        spec = load_sketch_file(sketch_file);
    else if (!sketch_id.empty())
        spec = spec_from_kind(sketch_id, tau1, tau2);
    else
        spec = canonical_spec(method, eq, tau1, tau2);

    StopRule stop;
    stop.max_iters = max_iters;
    stop.tol = tol;
    stop.criterion = eq.Xstar ? StopCriterion::RelErrorSq : StopCriterion::RelResidual;

    SolveOptions opts;
    opts.trace_stride = trace_stride;
    if (time_budget > 0) opts.time_budget_seconds = time_budget;

    Rng rng(derive_seed(seed, 1));
    const SolveReport rep = solve(eq, method, spec, stop, rng, opts);

    const char* crit = eq.Xstar ? "RE" : "RR";
    std::cout << "method=" << method_id << " sketch=" << sketch_kind_name(spec.index())
              << " iters=" << rep.iters << " converged=" << (rep.converged ? "true" : "false")
              << " " << crit << "=" << std::scientific << std::setprecision(6)
              << rep.error_trace.back().second << " wall_s=" << std::defaultfloat
              << rep.wall_seconds << "\n";

    if (!out_path.empty()) {
        if (format == "json") {
            nlohmann::json j = rep;
            j["method"] = method_id;
            j["criterion"] = crit;
            write_text_file(out_path, j.dump(2) + "\n");
        } else {
            std::ostringstream os;
            os << "iter," << (eq.Xstar ? "re" : "rr") << "\n";
            for (const auto& [it, err] : rep.error_trace)
                os << it << "," << std::setprecision(17) << err << "\n";
            write_text_file(out_path, os.str());
        }
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int run_rate(const ProblemFlags& pf, const std::string& sketch_id, const std::string& sketch_file,
             std::uint64_t seed, Index tau1, Index tau2, Index mc_trials,
             const std::string& out_path, const std::string& format) {
    const MatrixEquation eq = pf.build(seed);
    SketchSpec spec = spec_from_kind(sketch_id, tau1, tau2);
    if (!sketch_file.empty()) spec = load_sketch_file(sketch_file);

    Rng rng(derive_seed(seed, 2));
    const RateReport rep = rate_report(spec, eq.A, eq.B, eq.G, false, mc_trials, &rng);

    std::cout << std::setprecision(12);
    std::cout << "rho_exact=" << rep.rho_exact << "\n";
    std::cout << "rho_sigma=" << rep.rho_sigma << "\n";
    std::cout << "lower_bound=" << rep.lower_bound << "\n";
    if (rep.closed_form_bound)
        std::cout << "closed_form_bound=" << *rep.closed_form_bound << "\n";
    std::cout << "d_mean=" << rep.d_stats.mean << " d_min=" << rep.d_stats.min
              << " d_max=" << rep.d_stats.max << "\n";
    if (rep.mc_stderr) std::cout << "mc_stderr=" << *rep.mc_stderr << "\n";

    if (!out_path.empty()) {
        if (format == "json") {
            nlohmann::json j = rep;
            j["sketch"] = sketch_kind_name(spec.index());
            write_text_file(out_path, j.dump(2) + "\n");
        } else {
            std::ostringstream os;
            os << std::setprecision(17);
            os << "key,value\n";
            os << "rho_exact," << rep.rho_exact << "\n";
            os << "rho_sigma," << rep.rho_sigma << "\n";
            os << "lower_bound," << rep.lower_bound << "\n";
            if (rep.closed_form_bound) os << "closed_form_bound," << *rep.closed_form_bound << "\n";
            os << "d_mean," << rep.d_stats.mean << "\n";
            os << "d_min," << rep.d_stats.min << "\n";
            os << "d_max," << rep.d_stats.max << "\n";
            for (const auto& [value, prob] : rep.d_stats.dist)
                os << "d_dist_" << value << "," << prob << "\n";
            write_text_file(out_path, os.str());
        }
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int run_bench(BenchmarkConfig cfg, const std::string& out_path, const std::string& format) {
    cfg.keep_traces = format == "json";
    const auto records = run_benchmark(cfg);
    const auto summaries = summarize(records);

    std::ostringstream data;
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& rec : records) j.push_back(rec);
        data << j.dump(2) << "\n";
    } else {
        write_csv(data, records);
    }

    if (out_path.empty()) {
        std::cout << data.str();
    } else {
        write_text_file(out_path, data.str());
        write_summary(std::cout, summaries);
        std::cout << "wrote " << records.size() << " records to " << out_path << "\n";
    }
    return 0;
}

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed, bool list_only) {
    if (list_only) {
        for (const auto& name : verify_suite_names()) std::cout << name << "\n";
        return 0;
    }
    const auto results = run_verify(suites, seed);
    int failed = 0;
    for (const auto& res : results) {
        std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.name << ": " << res.detail << "\n";
        if (!res.pass) ++failed;
    }
    std::cout << results.size() - failed << "/" << results.size() << " suites passed (seed "
              << seed << ")\n";
    return failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "randomized sketch-and-project solvers for the matrix equation A X B = C\n"
        "methods: " +
        std::string(kMethodList) + "\nsketches: " + std::string(kSketchList)};
    app.require_subcommand(1);

    // gen ----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a problem and write it as Matrix Market files");
    ProblemFlags gen_pf;
    gen_pf.add_to(gen, false);
    std::uint64_t gen_seed = 0;
    std::string gen_out = ".";
    gen->add_option("--seed", gen_seed, "rng seed")->envname("MXSKETCH_SEED");
    gen->add_option("--out", gen_out, "output directory (A.mtx, B.mtx, C.mtx, Xstar.mtx)");

    // solve --------------------------------------------------------------
    auto* solve_cmd = app.add_subcommand("solve", "run one method on one problem");
    ProblemFlags solve_pf;
    solve_pf.add_to(solve_cmd, true);
    std::string solve_method = "grk", solve_sketch, solve_sketch_file, solve_out,
                solve_format = "json";
    std::uint64_t solve_seed = 0;
    std::int64_t solve_max_iters = 100000, solve_tau1 = 1, solve_tau2 = 1, solve_tau = 0,
                 solve_stride = 1;
    double solve_tol = 1e-6, solve_budget = 120.0;
    solve_cmd->add_option("--method", solve_method, std::string("method id, one of: ") + kMethodList)
        ->check(CLI::IsMember(kMethodIds));
    solve_cmd
        ->add_option("--sketch", solve_sketch,
                     std::string("sketch kind (default: the method's own), one of: ") + kSketchList)
        ->check(CLI::IsMember(kSketchIds));
    solve_cmd->add_option("--sketch-file", solve_sketch_file,
                          "JSON sketch spec (covers complete-discrete and custom covariances)");
    solve_cmd->add_option("--seed", solve_seed, "rng seed")->envname("MXSKETCH_SEED");
    solve_cmd->add_option("--max-iters", solve_max_iters, "iteration cap");
    solve_cmd->add_option("--tol", solve_tol, "stop tolerance on the squared relative error");
    solve_cmd->add_option("--tau1", solve_tau1, "row block size (grbk / block sketch)");
    solve_cmd->add_option("--tau2", solve_tau2, "column block size (grbk / block sketch)");
    auto* solve_tau_opt = solve_cmd->add_option("--tau", solve_tau, "sets both --tau1 and --tau2");
    solve_cmd->add_option("--trace-stride", solve_stride, "record the error every k iterations");
    solve_cmd->add_option("--time-budget", solve_budget, "wall clock budget in seconds (0 = off)");
    solve_cmd->add_option("--out", solve_out, "report file");
    solve_cmd->add_option("--format", solve_format, "report format: json (report) or csv (trace)")
        ->check(CLI::IsMember({"json", "csv"}));

    // rate ---------------------------------------------------------------
    auto* rate_cmd = app.add_subcommand("rate", "exact convergence rate and bounds for a sketch");
    ProblemFlags rate_pf;
    rate_pf.add_to(rate_cmd, true);
    std::string rate_sketch = "coord", rate_sketch_file, rate_out, rate_format = "json";
    std::uint64_t rate_seed = 0;
    std::int64_t rate_tau1 = 1, rate_tau2 = 1, rate_tau = 0, rate_mc = 10000;
    rate_cmd->add_option("--sketch", rate_sketch, std::string("sketch kind, one of: ") + kSketchList)
        ->check(CLI::IsMember(kSketchIds));
    rate_cmd->add_option("--sketch-file", rate_sketch_file, "JSON sketch spec");
    rate_cmd->add_option("--seed", rate_seed, "rng seed (Monte Carlo families)")
        ->envname("MXSKETCH_SEED");
    rate_cmd->add_option("--tau1", rate_tau1, "row block size for the block sketch");
    rate_cmd->add_option("--tau2", rate_tau2, "column block size for the block sketch");
    auto* rate_tau_opt = rate_cmd->add_option("--tau", rate_tau, "sets both --tau1 and --tau2");
    rate_cmd->add_option("--mc-trials", rate_mc, "Monte Carlo trials for gaussian sketches");
    rate_cmd->add_option("--out", rate_out, "report file");
    rate_cmd->add_option("--format", rate_format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // bench --------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "repeated-trial benchmark over several methods");
    ProblemFlags bench_pf;
    bench_pf.add_to(bench_cmd, false);
    std::vector<std::string> bench_methods = {"grk", "grbk", "rk-a", "rk-b", "rcd"};
    std::string bench_out, bench_format = "csv";
    std::uint64_t bench_seed = 0;
    std::int64_t bench_trials = 10, bench_tau1 = 1, bench_tau2 = 1, bench_tau = 0,
                 bench_threads = 1, bench_max_iters = 100000, bench_stride = 1;
    double bench_tol = 1e-6, bench_budget = 120.0;
    bench_cmd
        ->add_option("--methods", bench_methods,
                     std::string("comma-separated method ids, from: ") + kMethodList)
        ->delimiter(',');
    bench_cmd->add_option("--trials", bench_trials, "trials per method");
    bench_cmd->add_option("--seed", bench_seed, "base seed; trial t uses substream t")
        ->envname("MXSKETCH_SEED");
    bench_cmd->add_option("--max-iters", bench_max_iters, "iteration cap per trial");
    bench_cmd->add_option("--tol", bench_tol, "stop tolerance on the squared relative error");
    bench_cmd->add_option("--tau1", bench_tau1, "row block size (grbk)");
    bench_cmd->add_option("--tau2", bench_tau2, "column block size (grbk)");
    auto* bench_tau_opt = bench_cmd->add_option("--tau", bench_tau, "sets both --tau1 and --tau2");
    bench_cmd->add_option("--threads", bench_threads, "worker threads for the trial grid");
    bench_cmd->add_option("--trace-stride", bench_stride, "error evaluation stride");
    bench_cmd->add_option("--time-budget", bench_budget, "per-trial wall budget in seconds");
    bench_cmd->add_option("--out", bench_out, "records file (stdout when omitted)");
    bench_cmd->add_option("--format", bench_format, "records format: csv or json (with traces)")
        ->check(CLI::IsMember({"csv", "json"}));

    // recon --------------------------------------------------------------
    auto* recon_cmd =
        app.add_subcommand("recon", "phantom reconstruction demo with SSIM reporting");
    std::vector<std::string> recon_methods = {"gauss-rk-a", "rcd"};
    std::string recon_out, recon_format = "csv";
    std::uint64_t recon_seed = 0;
    std::int64_t recon_n = 30, recon_p = 0, recon_q = 0, recon_trials = 10,
                 recon_max_iters = 5000, recon_threads = 1;
    double recon_tol = 1e-12, recon_budget = 120.0;
    recon_cmd->add_option("--n", recon_n, "image size N (image is N x N)");
    recon_cmd->add_option("--p", recon_p, "rows of A (default 2N)");
    recon_cmd->add_option("--q", recon_q, "cols of B (default 2N)");
    recon_cmd
        ->add_option("--methods", recon_methods,
                     std::string("comma-separated method ids, from: ") + kMethodList)
        ->delimiter(',');
    recon_cmd->add_option("--trials", recon_trials, "trials per method");
    recon_cmd->add_option("--seed", recon_seed, "base seed")->envname("MXSKETCH_SEED");
    recon_cmd->add_option("--max-iters", recon_max_iters, "iteration budget per trial");
    recon_cmd->add_option("--tol", recon_tol, "stop tolerance on the squared relative error");
    recon_cmd->add_option("--threads", recon_threads, "worker threads");
    recon_cmd->add_option("--time-budget", recon_budget, "per-trial wall budget in seconds");
    recon_cmd->add_option("--out", recon_out, "records file");
    recon_cmd->add_option("--format", recon_format, "records format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // verify ---------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "run the property suites (CI gate)");
    std::vector<std::string> verify_suites;
    std::uint64_t verify_seed = 987654321;
    bool verify_list = false;
    verify_cmd
        ->add_option("--suite", verify_suites, "suite names (default: all); see --list")
        ->delimiter(',');
    verify_cmd->add_option("--seed", verify_seed, "suite seed")->envname("MXSKETCH_SEED");
    verify_cmd->add_flag("--list", verify_list, "list suite names and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(gen)) return run_gen(gen_pf, gen_seed, gen_out);

        if (app.got_subcommand(solve_cmd)) {
            if (*solve_tau_opt) solve_tau1 = solve_tau2 = solve_tau;
            return run_solve(solve_pf, solve_method, solve_sketch, solve_sketch_file, solve_seed,
                             solve_max_iters, solve_tol, solve_tau1, solve_tau2, solve_stride,
                             solve_budget, solve_out, solve_format);
        }

        if (app.got_subcommand(rate_cmd)) {
            if (*rate_tau_opt) rate_tau1 = rate_tau2 = rate_tau;
            return run_rate(rate_pf, rate_sketch, rate_sketch_file, rate_seed, rate_tau1,
                            rate_tau2, rate_mc, rate_out, rate_format);
        }

        if (app.got_subcommand(bench_cmd)) {
            if (*bench_tau_opt) bench_tau1 = bench_tau2 = bench_tau;
            BenchmarkConfig cfg;
            if (!bench_pf.type1.empty()) {
                cfg.problem.kind = ProblemKind::type1;
                cfg.problem.p = bench_pf.type1[0];
                cfg.problem.m = bench_pf.type1[1];
                cfg.problem.r1 = bench_pf.type1[2];
                cfg.problem.n = bench_pf.type1[3];
                cfg.problem.q = bench_pf.type1[4];
                cfg.problem.r2 = bench_pf.type1[5];
            } else if (!bench_pf.type2.empty()) {
                cfg.problem.kind = ProblemKind::type2;
                cfg.problem.p = bench_pf.type2[0];
                cfg.problem.m = bench_pf.type2[1];
                cfg.problem.n = bench_pf.type2[2];
                cfg.problem.q = bench_pf.type2[3];
            } else if (bench_pf.phantom_n > 0) {
                cfg.problem.kind = ProblemKind::phantom_recon;
                cfg.problem.N = bench_pf.phantom_n;
                cfg.problem.p = bench_pf.rows_p > 0 ? bench_pf.rows_p : 2 * bench_pf.phantom_n;
                cfg.problem.q = bench_pf.cols_q > 0 ? bench_pf.cols_q : 2 * bench_pf.phantom_n;
            } else {
                throw std::invalid_argument("bench needs --type1, --type2, or --phantom");
            }
            cfg.methods = parse_methods(bench_methods);
            cfg.trials = int(bench_trials);
            cfg.stop.max_iters = bench_max_iters;
            cfg.stop.tol = bench_tol;
            cfg.tau1 = bench_tau1;
            cfg.tau2 = bench_tau2;
            cfg.seed = bench_seed;
            cfg.threads = int(bench_threads);
            cfg.time_budget_seconds = bench_budget;
            cfg.trace_stride = bench_stride;
            return run_bench(cfg, bench_out, bench_format);
        }

        if (app.got_subcommand(recon_cmd)) {
            BenchmarkConfig cfg;
            cfg.problem.kind = ProblemKind::phantom_recon;
            cfg.problem.N = recon_n;
            cfg.problem.p = recon_p > 0 ? recon_p : 2 * recon_n;
            cfg.problem.q = recon_q > 0 ? recon_q : 2 * recon_n;
            cfg.methods = parse_methods(recon_methods);
            cfg.trials = int(recon_trials);
            cfg.stop.max_iters = recon_max_iters;
            cfg.stop.tol = recon_tol;
            cfg.seed = recon_seed;
            cfg.threads = int(recon_threads);
            cfg.time_budget_seconds = recon_budget;
            cfg.trace_stride = std::max<Index>(1, recon_max_iters / 100);
            return run_bench(cfg, recon_out, recon_format);
        }

        if (app.got_subcommand(verify_cmd)) return cmd_verify(verify_suites, verify_seed, verify_list);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
