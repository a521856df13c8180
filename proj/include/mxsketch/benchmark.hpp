#pragma once

#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mxsketch/datagen.hpp"
#include "mxsketch/matrix_market.hpp"
#include "mxsketch/metrics.hpp"
#include "mxsketch/solve.hpp"

namespace mxsketch {

enum class ProblemKind { type1, type2, phantom_recon, external };

// Description of one benchmark problem. Dimensions follow the generators:
// A is p x m, B is n x q; phantom reconstructions use m = n = N with the
// image as the known solution.
struct BenchProblem {
    ProblemKind kind = ProblemKind::type1;
    Index p = 50, m = 20, r1 = 20;
    Index n = 20, q = 50, r2 = 20;
    Index N = 30;
    std::string a_path, b_path;

    std::string name() const {
        std::ostringstream os;
        switch (kind) {
            case ProblemKind::type1:
                os << "type1-" << p << "x" << m << "r" << r1 << "-" << n << "x" << q << "r" << r2;
                break;
            case ProblemKind::type2:
                os << "type2-" << p << "x" << m << "-" << n << "x" << q;
                break;
            case ProblemKind::phantom_recon:
                os << "phantom-N" << N << "-" << p << "x" << q;
                break;
            case ProblemKind::external: {
                auto base = [](const std::string& s) {
                    const auto k = s.find_last_of("/\\");
                    return k == std::string::npos ? s : s.substr(k + 1);
                };
                os << "external-" << base(a_path) << "-" << base(b_path);
                break;
            }
        }
        return os.str();
    }
};

struct BenchmarkConfig {
    BenchProblem problem;
    std::vector<Method> methods;
    int trials = 10;
    StopRule stop;               // RelErrorSq, 1e-6, 100000 by default
    Index tau1 = 10, tau2 = 10;  // block sizes for grbk
    std::uint64_t seed = 0;
    int threads = 1;
    double time_budget_seconds = 120.0;
    Index trace_stride = 1;
    bool keep_traces = false;
};

struct ExperimentRecord {
    std::string method;
    std::string problem;
    std::uint64_t seed = 0;  // per-trial substream seed
    Index iters = 0;
    double wall_seconds = 0.0;
    double final_re = 0.0;
    bool converged = false;
    std::optional<double> ssim_value;
    std::vector<std::pair<Index, double>> trace;
};

// Instantiate the problem once from the instance substream so that every
// method and trial sees the same equation.
inline MatrixEquation make_problem(const BenchProblem& pb, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0));
    switch (pb.kind) {
        case ProblemKind::type1: {
            const auto pr = gen_type1(pb.p, pb.m, pb.r1, pb.n, pb.q, pb.r2, rng);
            return assemble(pr.A, pr.B);
        }
        case ProblemKind::type2: {
            const auto pr = gen_type2(pb.p, pb.m, pb.n, pb.q, rng);
            return assemble(pr.A, pr.B);
        }
        case ProblemKind::phantom_recon: {
            const auto pr = gen_type2(pb.p, pb.N, pb.N, pb.q, rng);
            return assemble(pr.A, pr.B, std::optional<Matrix>(phantom(pb.N)));
        }
        case ProblemKind::external: {
            const Matrix a = load_matrix_market(pb.a_path).matrix;
            const Matrix b = load_matrix_market(pb.b_path).matrix;
            return assemble(a, b);
        }
    }
    throw std::logic_error("make_problem: unhandled problem kind");
}

// Run every (method, trial) cell. Trials use independent substreams keyed
// by trial index, so the records do not depend on the thread count and a
// fixed seed reproduces them bit for bit.
inline std::vector<ExperimentRecord> run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_benchmark: trials must be positive");
    if (cfg.methods.empty()) throw std::invalid_argument("run_benchmark: no methods given");
    const MatrixEquation eq = make_problem(cfg.problem, cfg.seed);
    const std::string pname = cfg.problem.name();

    struct Job {
        std::size_t slot;
        Method method;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const Method method : cfg.methods)
        for (int t = 0; t < cfg.trials; ++t)
            jobs.push_back({jobs.size(), method, derive_seed(cfg.seed, std::uint64_t(t) + 1)});

    std::vector<ExperimentRecord> records(jobs.size());
    auto run_job = [&](const Job& job) {
        ExperimentRecord rec;
        rec.method = to_string(job.method);
        rec.problem = pname;
        rec.seed = job.seed;
        Rng rng(job.seed);
        SolveOptions opts;
        opts.trace_stride = cfg.trace_stride;
        opts.time_budget_seconds = cfg.time_budget_seconds;
        const SolveReport rep =
            solve(eq, job.method, canonical_spec(job.method, eq, cfg.tau1, cfg.tau2), cfg.stop,
                  rng, opts);
        rec.iters = rep.iters;
        rec.wall_seconds = rep.wall_seconds;
        rec.final_re = relative_error(rep.X, *eq.Xstar);
        rec.converged = rep.converged;
        if (cfg.problem.kind == ProblemKind::phantom_recon)
            rec.ssim_value = ssim(rep.X, *eq.Xstar);
        if (cfg.keep_traces) rec.trace = rep.error_trace;
        records[job.slot] = std::move(rec);
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (const Job& job : jobs) run_job(job);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w]() {
                for (std::size_t k = std::size_t(w); k < jobs.size(); k += std::size_t(threads))
                    run_job(jobs[k]);
            });
        for (auto& th : pool) th.join();
    }
    return records;
}

struct MethodSummary {
    std::string method;
    int trials = 0;
    double mean_iters = 0.0;
    double mean_wall = 0.0;
    double mean_final_re = 0.0;
    double convergence_fraction = 0.0;
    std::optional<double> mean_ssim;
};

inline std::vector<MethodSummary> summarize(const std::vector<ExperimentRecord>& records) {
    std::vector<MethodSummary> out;
    for (const auto& rec : records) {
        MethodSummary* s = nullptr;
        for (auto& cand : out)
            if (cand.method == rec.method) s = &cand;
        if (!s) {
            out.push_back({});
            s = &out.back();
            s->method = rec.method;
        }
        ++s->trials;
        s->mean_iters += double(rec.iters);
        s->mean_wall += rec.wall_seconds;
        s->mean_final_re += rec.final_re;
        s->convergence_fraction += rec.converged ? 1.0 : 0.0;
        if (rec.ssim_value) s->mean_ssim = s->mean_ssim.value_or(0.0) + *rec.ssim_value;
    }
    for (auto& s : out) {
        s.mean_iters /= s.trials;
        s.mean_wall /= s.trials;
        s.mean_final_re /= s.trials;
        s.convergence_fraction /= s.trials;
        if (s.mean_ssim) *s.mean_ssim /= s.trials;
    }
    return out;
}

namespace detail {

inline std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace detail

// Per-trial records. Iteration and timing cells show a '-' sentinel when
// the trial exhausted its budget without converging; the ssim column stays
// empty for problems without a reference image.
inline void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    os << "method,problem,seed,iters,wall_seconds,final_re,converged,ssim\n";
    for (const auto& r : records) {
        os << r.method << "," << r.problem << "," << r.seed << ",";
        if (r.converged)
            os << r.iters << "," << detail::fmt_double(r.wall_seconds);
        else
            os << "-,-";
        os << "," << detail::fmt_double(r.final_re) << "," << (r.converged ? "true" : "false")
           << ",";
        if (r.ssim_value) os << detail::fmt_double(*r.ssim_value);
        os << "\n";
    }
}

// Console table in the style of the iteration-count tables: mean IT and CPU
// per method, '-' once any trial ran out of budget.
inline void write_summary(std::ostream& os, const std::vector<MethodSummary>& summaries) {
    os << std::left << std::setw(12) << "method" << std::right << std::setw(12) << "mean_IT"
       << std::setw(14) << "mean_CPU_s" << std::setw(12) << "conv" << std::setw(14) << "mean_RE"
       << std::setw(12) << "mean_SSIM" << "\n";
    for (const auto& s : summaries) {
        os << std::left << std::setw(12) << s.method << std::right;
        if (s.convergence_fraction < 1.0) {
            os << std::setw(12) << "-" << std::setw(14) << "-";
        } else {
            os << std::setw(12) << std::fixed << std::setprecision(1) << s.mean_iters
               << std::setw(14) << std::setprecision(4) << s.mean_wall;
        }
        os << std::setw(12) << std::setprecision(2) << s.convergence_fraction << std::setw(14)
           << std::scientific << std::setprecision(3) << s.mean_final_re;
        os.unsetf(std::ios::floatfield);
        if (s.mean_ssim)
            os << std::setw(12) << std::fixed << std::setprecision(4) << *s.mean_ssim;
        else
            os << std::setw(12) << "-";
        os.unsetf(std::ios::floatfield);
        os << "\n";
    }
}

// Two-column iteration/error trace, consumable by any plotting tool.
inline void write_trace(std::ostream& os, const std::vector<std::pair<Index, double>>& trace) {
    for (const auto& [it, err] : trace) os << it << " " << detail::fmt_double(err) << "\n";
}

}  // namespace mxsketch
