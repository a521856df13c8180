#include <catch2/catch_amalgamated.hpp>

#include "mxsketch/datagen.hpp"

using namespace mxsketch;

TEST_CASE("type 1 problems have prescribed ranks and spectra") {
    Rng rng(100);
    const auto pair = gen_type1(6, 4, 3, 4, 6, 2, rng);
    CHECK(pair.A.rows() == 6);
    CHECK(pair.A.cols() == 4);
    CHECK(pair.B.rows() == 4);
    CHECK(pair.B.cols() == 6);
    CHECK(numerical_rank(pair.A) == 3);
    CHECK(numerical_rank(pair.B) == 2);

    // Nonzero singular values are drawn inside (1, 2).
    Eigen::JacobiSVD<Matrix> svd_a(pair.A);
    for (Index i = 0; i < 3; ++i) {
        CHECK(svd_a.singularValues()(i) > 1.0);
        CHECK(svd_a.singularValues()(i) < 2.0);
    }
    Eigen::JacobiSVD<Matrix> svd_b(pair.B);
    for (Index i = 0; i < 2; ++i) {
        CHECK(svd_b.singularValues()(i) > 1.0);
        CHECK(svd_b.singularValues()(i) < 2.0);
    }

    CHECK_THROWS_AS(gen_type1(3, 4, 5, 2, 2, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_type1(3, 4, 0, 2, 2, 1, rng), std::invalid_argument);
}

TEST_CASE("type 2 problems are dense gaussian") {
    Rng rng(200);
    const auto pair = gen_type2(5, 3, 2, 4, rng);
    CHECK(pair.A.rows() == 5);
    CHECK(pair.A.cols() == 3);
    CHECK(pair.B.rows() == 2);
    CHECK(pair.B.cols() == 4);
    CHECK(numerical_rank(pair.A) == 3);

    // Sample mean of many entries concentrates near zero.
    Rng rng2(201);
    double acc = 0.0;
    int cnt = 0;
    for (int t = 0; t < 50; ++t) {
        const auto pr = gen_type2(6, 6, 6, 6, rng2);
        acc += pr.A.sum() + pr.B.sum();
        cnt += 72;
    }
    CHECK(std::abs(acc / cnt) < 3.0 / std::sqrt(static_cast<double>(cnt)));
}

TEST_CASE("assemble builds a consistent equation") {
    Rng rng(300);
    const auto pair = gen_type2(4, 3, 3, 4, rng);
    const MatrixEquation eq = assemble(pair.A, pair.B);
    REQUIRE(eq.Xstar.has_value());
    CHECK(max_abs(Matrix(*eq.Xstar - Matrix::Ones(3, 3))) == 0.0);
    CHECK(max_abs(Matrix(eq.A * *eq.Xstar * eq.B - eq.C)) < 1e-12);

    Matrix xs(3, 3);
    xs.setConstant(2.5);
    const MatrixEquation eq2 = assemble(pair.A, pair.B, std::optional<Matrix>(xs));
    CHECK(max_abs(Matrix(*eq2.Xstar - xs)) == 0.0);

    CHECK_THROWS_AS(assemble(pair.A, pair.B, std::optional<Matrix>(Matrix::Ones(2, 2))),
                    std::invalid_argument);
}

TEST_CASE("phantom image") {
    const Matrix img = phantom(32);
    CHECK(img.rows() == 32);
    CHECK(img.cols() == 32);

    int n_zero = 0, n_low = 0, n_mid = 0, n_disk = 0;
    for (Index i = 0; i < 32; ++i)
        for (Index j = 0; j < 32; ++j) {
            const double v = img(i, j);
            if (v == 0.0) ++n_zero;
            else if (v == 0.55) ++n_low;
            else if (v == 0.85) ++n_mid;
            else if (v == 1.0) ++n_disk;
            else FAIL("unexpected gray level " << v);
        }
    CHECK(n_zero > 0);
    CHECK(n_low > 0);
    CHECK(n_mid > 0);
    CHECK(n_disk > 0);

    // The disk is centered: the middle pixel is inside it.
    CHECK(img(16, 16) == 1.0);
    // Corners stay background.
    CHECK(img(0, 0) == 0.0);
    CHECK(img(31, 31) == 0.0);

    // Same size in, same image out.
    CHECK(max_abs(Matrix(phantom(32) - img)) == 0.0);

    CHECK_THROWS_AS(phantom(3), std::invalid_argument);
}

TEST_CASE("generation is reproducible per seed") {
    Rng r1(42), r2(42), r3(43);
    const auto p1 = gen_type1(5, 4, 3, 3, 5, 2, r1);
    const auto p2 = gen_type1(5, 4, 3, 3, 5, 2, r2);
    const auto p3 = gen_type1(5, 4, 3, 3, 5, 2, r3);
    CHECK(max_abs(Matrix(p1.A - p2.A)) == 0.0);
    CHECK(max_abs(Matrix(p1.B - p2.B)) == 0.0);
    CHECK(max_abs(Matrix(p1.A - p3.A)) > 0.0);
}
