#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "mxsketch/benchmark.hpp"
#include "mxsketch/matrix_market.hpp"
#include "mxsketch/samplers.hpp"
#include "mxsketch/theory.hpp"

// JSON bindings for the public value types. Everything round-trips through
// nlohmann::json so experiment configs and reports can live in plain files;
// matrices are written as row-major nested arrays.

namespace mxsketch {

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("matrix_from_json: expected an array of rows");
    const Index rows = Index(j.size());
    if (rows == 0) return Matrix(0, 0);
    if (!j[0].is_array())
        throw std::invalid_argument("matrix_from_json: expected nested row arrays");
    const Index cols = Index(j[0].size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || Index(j[i].size()) != cols)
            throw std::invalid_argument("matrix_from_json: ragged row " + std::to_string(i));
        for (Index k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
    }
    require_finite(m, "matrix_from_json");
    return m;
}

namespace detail {

inline nlohmann::json vector_to_json(const Vector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

inline Vector vector_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("vector_from_json: expected an array");
    Vector v(Index(j.size()));
    for (Index i = 0; i < v.size(); ++i) v[i] = j[std::size_t(i)].get<double>();
    return v;
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const SketchSpec& spec) {
    j = nlohmann::json::object();
    j["kind"] = sketch_kind_name(spec.index());
    if (const auto* bp = std::get_if<BlockPartition>(&spec)) {
        j["tau1"] = bp->tau1;
        j["tau2"] = bp->tau2;
    } else if (const auto* cd = std::get_if<CompleteDiscrete>(&spec)) {
        auto members = [](const std::vector<Matrix>& ms) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& m : ms) arr.push_back(matrix_to_json(m));
            return arr;
        };
        j["s_members"] = members(cd->s_members);
        j["s_probs"] = detail::vector_to_json(cd->s_probs);
        j["p_members"] = members(cd->p_members);
        j["p_probs"] = detail::vector_to_json(cd->p_probs);
    } else if (const auto* g = std::get_if<GaussianPair>(&spec)) {
        if (g->sigma1.size() > 0) j["sigma1"] = matrix_to_json(g->sigma1);
        if (g->sigma2.size() > 0) j["sigma2"] = matrix_to_json(g->sigma2);
    }
}

inline void from_json(const nlohmann::json& j, SketchSpec& spec) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "coord") {
        spec = CoordinatePair{};
    } else if (kind == "row") {
        spec = RowOnly{};
    } else if (kind == "col") {
        spec = ColOnly{};
    } else if (kind == "identity") {
        spec = IdentityPair{};
    } else if (kind == "block") {
        BlockPartition bp;
        bp.tau1 = j.at("tau1").get<Index>();
        bp.tau2 = j.at("tau2").get<Index>();
        spec = bp;
    } else if (kind == "complete-discrete") {
        CompleteDiscrete cd;
        for (const auto& m : j.at("s_members")) cd.s_members.push_back(matrix_from_json(m));
        for (const auto& m : j.at("p_members")) cd.p_members.push_back(matrix_from_json(m));
        cd.s_probs = detail::vector_from_json(j.at("s_probs"));
        cd.p_probs = detail::vector_from_json(j.at("p_probs"));
        spec = std::move(cd);
    } else if (kind == "gauss") {
        GaussianPair g;
        if (j.contains("sigma1")) g.sigma1 = matrix_from_json(j["sigma1"]);
        if (j.contains("sigma2")) g.sigma2 = matrix_from_json(j["sigma2"]);
        spec = std::move(g);
    } else {
        throw std::invalid_argument("SketchSpec: unknown kind '" + kind + "'");
    }
}

inline void to_json(nlohmann::json& j, const SolveReport& rep) {
    j = nlohmann::json::object();
    j["iters"] = rep.iters;
    j["converged"] = rep.converged;
    j["wall_seconds"] = rep.wall_seconds;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& [it, err] : rep.error_trace) trace.push_back({it, err});
    j["trace"] = std::move(trace);
    j["X"] = matrix_to_json(rep.X);
}

inline void to_json(nlohmann::json& j, const DStats& d) {
    j = nlohmann::json::object();
    j["mean"] = d.mean;
    j["min"] = d.min;
    j["max"] = d.max;
    nlohmann::json dist = nlohmann::json::object();
    for (const auto& [value, prob] : d.dist) dist[std::to_string(value)] = prob;
    j["dist"] = std::move(dist);
}

inline void to_json(nlohmann::json& j, const RateReport& rep) {
    j = nlohmann::json::object();
    j["rho_exact"] = rep.rho_exact;
    j["rho_sigma"] = rep.rho_sigma;
    j["lower_bound"] = rep.lower_bound;
    if (rep.closed_form_bound)
        j["closed_form_bound"] = *rep.closed_form_bound;
    else
        j["closed_form_bound"] = nullptr;
    j["d"] = rep.d_stats;
    if (rep.mc_stderr) j["mc_stderr"] = *rep.mc_stderr;
}

inline void to_json(nlohmann::json& j, const ExperimentRecord& rec) {
    j = nlohmann::json::object();
    j["method"] = rec.method;
    j["problem"] = rec.problem;
    j["seed"] = rec.seed;
    j["iters"] = rec.iters;
    j["wall_seconds"] = rec.wall_seconds;
    j["final_re"] = rec.final_re;
    j["converged"] = rec.converged;
    if (rec.ssim_value)
        j["ssim"] = *rec.ssim_value;
    else
        j["ssim"] = nullptr;
    if (!rec.trace.empty()) {
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& [it, err] : rec.trace) trace.push_back({it, err});
        j["trace"] = std::move(trace);
    }
}

inline void to_json(nlohmann::json& j, const MethodSummary& s) {
    j = nlohmann::json::object();
    j["method"] = s.method;
    j["trials"] = s.trials;
    j["mean_iters"] = s.mean_iters;
    j["mean_wall"] = s.mean_wall;
    j["mean_final_re"] = s.mean_final_re;
    j["convergence_fraction"] = s.convergence_fraction;
    if (s.mean_ssim)
        j["mean_ssim"] = *s.mean_ssim;
    else
        j["mean_ssim"] = nullptr;
}

inline void to_json(nlohmann::json& j, const MtxStats& s) {
    j = nlohmann::json::object();
    j["rows"] = s.rows;
    j["cols"] = s.cols;
    j["nnz"] = s.nnz;
    j["density"] = s.density;
    if (s.rank)
        j["rank"] = *s.rank;
    else
        j["rank"] = nullptr;
}

}  // namespace mxsketch
