#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mxsketch/datagen.hpp"
#include "mxsketch/matrix_market.hpp"
#include "mxsketch/metrics.hpp"

using namespace mxsketch;

namespace {

Matrix randn(Index r, Index c, Rng& rng) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) m(i, j) = rng.normal();
    return m;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("relative error is a squared ratio") {
    Matrix xs(1, 1), x(1, 1);
    xs << 1;
    x << 3;
    CHECK(relative_error(x, xs) == Catch::Approx(4.0));
    CHECK(relative_error(xs, xs) == 0.0);

    Rng rng(1);
    const Matrix a = randn(3, 3, rng), b = randn(3, 3, rng);
    CHECK(relative_error(a, b) ==
          Catch::Approx((a - b).squaredNorm() / b.squaredNorm()));

    // Frobenius norms are orthogonally invariant, so the error is too.
    const Matrix q = orthonormal_columns<double>(3, 3, rng);
    CHECK(relative_error(Matrix(q * a), Matrix(q * b)) ==
          Catch::Approx(relative_error(a, b)).epsilon(1e-12));

    CHECK_THROWS_AS(relative_error(a, Matrix(Matrix::Zero(3, 3))), std::invalid_argument);
    CHECK_THROWS_AS(relative_error(a, Matrix(Matrix::Ones(2, 2))), std::invalid_argument);
}

TEST_CASE("structural similarity") {
    const Matrix img = phantom(16);
    CHECK(ssim(img, img) == Catch::Approx(1.0).margin(1e-15));

    // Constant images hit the stabilizer floor: value c1 / (1 + c1) with the
    // default k1 = 0.01 and the L = 1 fallback.
    const Matrix zero = Matrix::Zero(4, 4);
    const Matrix one = Matrix::Ones(4, 4);
    const double c1 = 1e-4;
    CHECK(ssim(zero, one) == Catch::Approx(c1 / (1.0 + c1)).epsilon(1e-12));

    // A small perturbation keeps the index strictly inside (0, 1).
    Rng rng(2);
    Matrix noisy = img;
    for (Index i = 0; i < noisy.rows(); ++i)
        for (Index j = 0; j < noisy.cols(); ++j) noisy(i, j) += 0.01 * rng.normal();
    const double s = ssim(noisy, img);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    CHECK(s > 0.9);

    // Explicit dynamic range overrides the inferred one.
    CHECK(ssim(noisy, img, 255.0) > ssim(noisy, img));

    CHECK_THROWS_AS(ssim(img, Matrix(Matrix::Ones(2, 2))), std::invalid_argument);
    CHECK_THROWS_AS(ssim(img, img, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("speedup ratio") {
    CHECK(speedup(2.0, 1.0) == Catch::Approx(2.0));
    CHECK(speedup(0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(speedup(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(speedup(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("matrix market round trip") {
    Rng rng(3);
    const Matrix m = randn(4, 3, rng);
    TempFile f("mxsketch_test_roundtrip.mtx");
    save_matrix_market(f.path, m);
    const MtxFile loaded = load_matrix_market(f.path);
    CHECK(max_abs(Matrix(loaded.matrix - m)) < 1e-15);
    CHECK(loaded.stats.rows == 4);
    CHECK(loaded.stats.cols == 3);
    CHECK(loaded.stats.nnz == 12);
    CHECK(loaded.stats.density == Catch::Approx(1.0));
    REQUIRE(loaded.stats.rank.has_value());
    CHECK(*loaded.stats.rank == 3);
}

TEST_CASE("matrix market symmetric expansion") {
    TempFile f("mxsketch_test_sym.mtx");
    {
        std::ofstream out(f.path);
        out << "%%MatrixMarket matrix coordinate real symmetric\n";
        out << "2 2 2\n";
        out << "1 1 1.0\n";
        out << "2 1 5.0\n";
    }
    const MtxFile loaded = load_matrix_market(f.path);
    CHECK(loaded.matrix(0, 0) == 1.0);
    CHECK(loaded.matrix(1, 0) == 5.0);
    CHECK(loaded.matrix(0, 1) == 5.0);
    CHECK(loaded.matrix(1, 1) == 0.0);
}

TEST_CASE("matrix market rejects what it cannot represent") {
    TempFile f("mxsketch_test_bad.mtx");

    auto write = [&f](const std::string& body) {
        std::ofstream out(f.path);
        out << body;
    };

    write("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n");
    CHECK_THROWS_WITH(load_matrix_market(f.path), Catch::Matchers::ContainsSubstring("pattern"));

    write("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1.0 0.0\n");
    CHECK_THROWS_WITH(load_matrix_market(f.path), Catch::Matchers::ContainsSubstring("complex"));

    write("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
    CHECK_THROWS_WITH(load_matrix_market(f.path), Catch::Matchers::ContainsSubstring("array"));

    write("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
    CHECK_THROWS_WITH(load_matrix_market(f.path),
                      Catch::Matchers::ContainsSubstring("out of range"));

    write("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n");
    CHECK_THROWS_WITH(load_matrix_market(f.path),
                      Catch::Matchers::ContainsSubstring("mismatch"));

    CHECK_THROWS_WITH(load_matrix_market("/nonexistent/__mxsketch.mtx"),
                      Catch::Matchers::ContainsSubstring("cannot open"));

    CHECK_THROWS_AS(save_matrix_market(f.path, Matrix()), std::invalid_argument);
}
