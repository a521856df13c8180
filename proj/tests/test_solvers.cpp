#include <catch2/catch_amalgamated.hpp>

#include "mxsketch/datagen.hpp"
#include "mxsketch/metrics.hpp"
#include "mxsketch/solve.hpp"
#include "mxsketch/steps.hpp"

using namespace mxsketch;

namespace {

Matrix randn(Index r, Index c, Rng& rng) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) m(i, j) = rng.normal();
    return m;
}

MatrixEquation random_equation(Rng& rng, Index p = 4, Index m = 3, Index n = 3, Index q = 4) {
    const auto pair = gen_type2(p, m, n, q, rng);
    return assemble(pair.A, pair.B);
}

}  // namespace

TEST_CASE("every step leaves the solution fixed") {
    Rng rng(101);
    const MatrixEquation eq = random_equation(rng);
    const Matrix xs = *eq.Xstar;
    const Matrix b_pinv = pseudoinverse(eq.B);
    const Matrix a_pinv = pseudoinverse(eq.A);

    CHECK(max_abs(Matrix(grk_step(xs, eq, 1, 2) - xs)) < 1e-12);
    CHECK(max_abs(Matrix(grbk_step(xs, eq, {0, 2}, {1, 3}) - xs)) < 1e-12);
    CHECK(max_abs(Matrix(rka_step(xs, eq, 0, b_pinv) - xs)) < 1e-12);
    CHECK(max_abs(Matrix(rkb_step(xs, eq, 3, a_pinv) - xs)) < 1e-12);
    CHECK(max_abs(Matrix(rcd_step(xs, eq, 1, b_pinv) - xs)) < 1e-12);

    Vector zeta(4), eta(4);
    zeta << 0.3, -1.2, 0.7, 0.1;
    eta << -0.4, 0.9, 1.5, -0.2;
    CHECK(max_abs(Matrix(gauss_step(xs, eq, zeta, eta) - xs)) < 1e-12);
    CHECK(max_abs(Matrix(gaussrka_step(xs, eq, zeta, b_pinv) - xs)) < 1e-12);
    CHECK(max_abs(Matrix(gaussrkb_step(xs, eq, eta, a_pinv) - xs)) < 1e-12);

    const Matrix s = randn(4, 2, rng), p = randn(4, 2, rng);
    CHECK(max_abs(Matrix(general_step(xs, eq, s, p) - xs)) < 1e-12);
}

TEST_CASE("scalar grk solves in one step") {
    Matrix a(1, 1), b(1, 1), c(1, 1);
    a << 2;
    b << 3;
    c << 6;
    const MatrixEquation eq(a, b, c);
    const Matrix x1 = grk_step(Matrix(Matrix::Zero(1, 1)), eq, 0, 0);
    CHECK(x1(0, 0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("specialized steps match the general update") {
    Rng rng(202);
    for (int rep = 0; rep < 10; ++rep) {
        const MatrixEquation eq = random_equation(rng, 4, 3, 3, 4);
        const Matrix x0 = randn(3, 3, rng);
        const Matrix b_pinv = pseudoinverse(eq.B);
        const Matrix a_pinv = pseudoinverse(eq.A);
        const Matrix i_p = Matrix::Identity(4, 4), i_q = Matrix::Identity(4, 4);

        const Index i = static_cast<Index>(rng.below(4));
        const Index j = static_cast<Index>(rng.below(4));
        const Matrix ei = detail::unit_column<double>(4, i);
        const Matrix ej = detail::unit_column<double>(4, j);

        CHECK(max_abs(Matrix(grk_step(x0, eq, i, j) - general_step(x0, eq, ei, ej))) < 1e-10);
        CHECK(max_abs(Matrix(rka_step(x0, eq, i, b_pinv) - general_step(x0, eq, ei, i_q))) <
              1e-10);
        CHECK(max_abs(Matrix(rkb_step(x0, eq, j, a_pinv) - general_step(x0, eq, i_p, ej))) <
              1e-10);

        const Matrix sel_s = detail::selector_columns<double>(4, {0, 2});
        const Matrix sel_p = detail::selector_columns<double>(4, {1, 3});
        CHECK(max_abs(Matrix(grbk_step(x0, eq, {0, 2}, {1, 3}) -
                             general_step(x0, eq, sel_s, sel_p))) < 1e-10);

        Vector zeta(4), eta(4);
        for (Index k = 0; k < 4; ++k) {
            zeta(k) = rng.normal();
            eta(k) = rng.normal();
        }
        CHECK(max_abs(Matrix(gauss_step(x0, eq, zeta, eta) -
                             general_step(x0, eq, Matrix(zeta), Matrix(eta)))) < 1e-10);
        CHECK(max_abs(Matrix(gaussrka_step(x0, eq, zeta, b_pinv) -
                             general_step(x0, eq, Matrix(zeta), i_q))) < 1e-10);
        CHECK(max_abs(Matrix(gaussrkb_step(x0, eq, eta, a_pinv) -
                             general_step(x0, eq, i_p, Matrix(eta)))) < 1e-10);
    }
}

TEST_CASE("cd-pd matches the general update under G = A") {
    Rng rng(303);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix m = randn(3, 3, rng);
        const Matrix a = m.transpose() * m + 0.5 * Matrix::Identity(3, 3);
        const Matrix b = randn(2, 4, rng);
        const Matrix xs = randn(3, 2, rng);
        const MatrixEquation eq(a, b, Matrix(a * xs * b), xs, SpdMat(a));

        const Matrix x0 = randn(3, 2, rng);
        const Matrix bt_pinv = pseudoinverse(b);
        const Index i = static_cast<Index>(rng.below(3));
        const Matrix ei = detail::unit_column<double>(3, i);
        const Matrix gen = general_step(x0, eq, ei, Matrix(Matrix::Identity(4, 4)));
        CHECK(max_abs(Matrix(cdpd_step(x0, eq, i, bt_pinv) - gen)) < 1e-10);
    }
}

TEST_CASE("rcd matches the general update under G = A'A") {
    Rng rng(404);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix a = randn(5, 3, rng);  // full column rank a.s.
        const Matrix b = randn(2, 4, rng);
        const Matrix xs = randn(3, 2, rng);
        const MatrixEquation eq(a, b, Matrix(a * xs * b), xs,
                                SpdMat(Matrix(a.transpose() * a)));

        const Matrix x0 = randn(3, 2, rng);
        const Matrix bt_pinv = pseudoinverse(b);
        const Index i = static_cast<Index>(rng.below(3));
        const Matrix s = a.col(i);  // S = A e_i
        const Matrix gen = general_step(x0, eq, s, Matrix(Matrix::Identity(4, 4)));
        CHECK(max_abs(Matrix(rcd_step(x0, eq, i, bt_pinv) - gen)) < 1e-10);
    }
}

TEST_CASE("update lands on the sketched constraint") {
    Rng rng(505);
    for (int rep = 0; rep < 20; ++rep) {
        const MatrixEquation eq = random_equation(rng, 5, 3, 3, 5);
        const Matrix x0 = randn(3, 3, rng);
        const Matrix s = randn(5, 2, rng), p = randn(5, 2, rng);
        const Matrix x1 = general_step(x0, eq, s, p);
        const Matrix gap = s.transpose() * (eq.A * x1 * eq.B - eq.C) * p;
        CHECK(max_abs(gap) < 1e-9);
    }
}

TEST_CASE("per-step Pythagoras identity in the G-norm") {
    Rng rng(606);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix m = randn(3, 3, rng);
        const SpdMat g(Matrix(m.transpose() * m + 0.5 * Matrix::Identity(3, 3)));
        const auto pair = gen_type2(4, 3, 3, 4, rng);
        const Matrix xs = randn(3, 3, rng);
        const MatrixEquation eq(pair.A, pair.B, Matrix(pair.A * xs * pair.B), xs, g);

        const Matrix x0 = randn(3, 3, rng);
        const Matrix s = randn(4, 2, rng), p = randn(4, 2, rng);
        const Matrix x1 = general_step(x0, eq, s, p);

        const double before = weighted_frob_sq(Matrix(x0 - xs), g);
        const double after = weighted_frob_sq(Matrix(x1 - xs), g);
        const double moved = weighted_frob_sq(Matrix(x1 - x0), g);
        CHECK(after + moved == Catch::Approx(before).epsilon(1e-9));
        CHECK(after <= before + 1e-12);
    }
}

TEST_CASE("grbk with singleton blocks is grk") {
    Rng rng(707);
    const MatrixEquation eq = random_equation(rng);
    const Matrix x0 = randn(3, 3, rng);
    CHECK(max_abs(Matrix(grbk_step(x0, eq, {2}, {1}) - grk_step(x0, eq, 2, 1))) < 1e-12);
}

TEST_CASE("gauss step with unit vectors is grk") {
    Rng rng(808);
    const MatrixEquation eq = random_equation(rng);
    const Matrix x0 = randn(3, 3, rng);
    Vector zeta = Vector::Zero(4), eta = Vector::Zero(4);
    zeta(1) = 1.0;
    eta(3) = 1.0;
    CHECK(max_abs(Matrix(gauss_step(x0, eq, zeta, eta) - grk_step(x0, eq, 1, 3))) < 1e-12);
}

TEST_CASE("method names round trip") {
    for (const Method m : all_methods()) {
        CHECK(method_from_string(to_string(m)) == m);
    }
    CHECK(method_from_string("grk") == Method::grk);
    CHECK(method_from_string("gauss-rk-a") == Method::gauss_rk_a);
    CHECK_THROWS_AS(method_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("solve stops immediately at the solution") {
    Rng data_rng(11), rng(12);
    const MatrixEquation eq = random_equation(data_rng);
    SolveOptions opts;
    opts.X0 = *eq.Xstar;
    const SolveReport rep = solve(eq, Method::grk, StopRule{}, rng, opts);
    CHECK(rep.iters == 0);
    CHECK(rep.converged);
}

TEST_CASE("grbk under the identity pair converges in one step") {
    Rng data_rng(13), rng(14);
    const auto pair = gen_type1(6, 3, 3, 3, 6, 3, data_rng);
    const MatrixEquation eq = assemble(pair.A, pair.B);
    StopRule stop;
    stop.tol = 1e-12;
    const SolveReport rep =
        solve(eq, Method::grbk, SketchSpec{IdentityPair{}}, stop, rng);
    CHECK(rep.iters == 1);
    CHECK(rep.converged);
    CHECK(relative_error(rep.X, *eq.Xstar) < 1e-12);
}

TEST_CASE("solve rejects a spec that does not fit the method") {
    Rng data_rng(15), rng(16);
    const MatrixEquation eq = random_equation(data_rng);
    CHECK_THROWS_AS(solve(eq, Method::grk, SketchSpec{IdentityPair{}}, StopRule{}, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve(eq, Method::gauss_grk, SketchSpec{CoordinatePair{}}, StopRule{}, rng),
                    std::invalid_argument);
}

TEST_CASE("rcd requires full column rank") {
    Rng data_rng(17), rng(18);
    const auto pair = gen_type2(2, 3, 3, 2, data_rng);  // wide A: A'A is singular
    const MatrixEquation eq = assemble(pair.A, pair.B);
    CHECK_THROWS_AS(solve(eq, Method::rcd, StopRule{}, rng), std::invalid_argument);
}

TEST_CASE("cd-pd requires a square positive matrix") {
    Rng data_rng(19), rng(20);
    const MatrixEquation eq = random_equation(data_rng, 4, 3, 3, 4);
    CHECK_THROWS_AS(canonical_spec(Method::cd_pd, eq), std::invalid_argument);
}

TEST_CASE("solve is deterministic per seed") {
    Rng data_rng(21);
    const MatrixEquation eq = random_equation(data_rng, 6, 4, 4, 6);
    StopRule stop;
    stop.tol = 1e-10;
    Rng r1(99), r2(99);
    const SolveReport a = solve(eq, Method::grk, stop, r1);
    const SolveReport b = solve(eq, Method::grk, stop, r2);
    CHECK(a.iters == b.iters);
    CHECK(a.converged == b.converged);
    CHECK(max_abs(Matrix(a.X - b.X)) == 0.0);
    REQUIRE(a.error_trace.size() == b.error_trace.size());
    for (std::size_t k = 0; k < a.error_trace.size(); ++k) {
        CHECK(a.error_trace[k].first == b.error_trace[k].first);
        CHECK(a.error_trace[k].second == b.error_trace[k].second);
    }
}

TEST_CASE("residual criterion works without a reference solution") {
    Rng data_rng(23), rng(24);
    const auto pair = gen_type2(4, 3, 3, 4, data_rng);
    const Matrix xs = Matrix::Ones(3, 3);
    const MatrixEquation eq(pair.A, pair.B, Matrix(pair.A * xs * pair.B));
    REQUIRE_FALSE(eq.Xstar.has_value());

    StopRule stop;
    stop.criterion = StopCriterion::RelResidual;
    stop.tol = 1e-10;
    const SolveReport rep = solve(eq, Method::grk, stop, rng);
    CHECK(rep.converged);
    const double rr = (eq.A * rep.X * eq.B - eq.C).squaredNorm() / eq.C.squaredNorm();
    CHECK(rr < 1e-9);

    // The error criterion is meaningless here and must be refused.
    StopRule bad;
    bad.criterion = StopCriterion::RelErrorSq;
    CHECK_THROWS_AS(solve(eq, Method::grk, bad, rng), std::invalid_argument);
}

TEST_CASE("trace stride thins the error trace") {
    Rng data_rng(25), rng(26);
    const MatrixEquation eq = random_equation(data_rng, 6, 4, 4, 6);
    StopRule stop;
    stop.tol = 1e-8;
    SolveOptions opts;
    opts.trace_stride = 7;
    const SolveReport rep = solve(eq, Method::grk, stop, rng, opts);
    REQUIRE(rep.error_trace.size() >= 2);
    for (std::size_t k = 0; k + 1 < rep.error_trace.size(); ++k)
        CHECK(rep.error_trace[k].first % 7 == 0);
    CHECK(rep.error_trace.back().first == rep.iters);
}

TEST_CASE("stop rule validation") {
    StopRule bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.tol = 1e-6;
    bad.max_iters = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("equation constructor checks consistency") {
    Matrix a(2, 2), b(2, 2);
    a << 1, 0, 0, 1;
    b << 2, 0, 0, 2;
    const Matrix xs = Matrix::Ones(2, 2);
    CHECK_NOTHROW(MatrixEquation(a, b, Matrix(a * xs * b), xs));
    Matrix c_bad = a * xs * b;
    c_bad(0, 0) += 1.0;
    CHECK_THROWS_AS(MatrixEquation(a, b, c_bad, xs), std::invalid_argument);
}
