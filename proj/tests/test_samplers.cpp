#include <catch2/catch_amalgamated.hpp>

#include "mxsketch/samplers.hpp"

using namespace mxsketch;

TEST_CASE("row and column probabilities") {
    Matrix a(2, 2);
    a << 3, 4, 0, 5;  // both rows have squared norm 25
    const Vector pr = row_probabilities(a);
    CHECK(pr(0) == Catch::Approx(0.5));
    CHECK(pr(1) == Catch::Approx(0.5));

    const Vector pi = row_probabilities(Matrix(Matrix::Identity(3, 3)));
    for (Index i = 0; i < 3; ++i) CHECK(pi(i) == Catch::Approx(1.0 / 3.0));

    Matrix z(3, 2);
    z << 1, 0, 0, 0, 0, 1;  // middle row vanishes
    const Vector pz = row_probabilities(z);
    CHECK(pz(1) == 0.0);
    CHECK(pz.sum() == Catch::Approx(1.0));

    const Vector pc = col_probabilities(a);
    CHECK(pc(0) == Catch::Approx(9.0 / 50.0));
    CHECK(pc(1) == Catch::Approx(41.0 / 50.0));

    CHECK_THROWS_AS(row_probabilities(Matrix(Matrix::Zero(2, 2))), std::invalid_argument);
    CHECK_THROWS_AS(col_probabilities(Matrix(Matrix::Zero(2, 2))), std::invalid_argument);
}

TEST_CASE("convenient probabilities") {
    Matrix a(2, 2);
    a << 1, 0, 1, 1;

    // Unit-vector members reduce to the row distribution.
    std::vector<Matrix> units{detail::unit_column<double>(2, 0), detail::unit_column<double>(2, 1)};
    const Vector pu = convenient_probabilities(a, units);
    const Vector pr = row_probabilities(a);
    CHECK(pu(0) == Catch::Approx(pr(0)));
    CHECK(pu(1) == Catch::Approx(pr(1)));

    // A single member always gets the whole mass.
    const Vector one = convenient_probabilities(a, {Matrix(Matrix::Identity(2, 2))});
    REQUIRE(one.size() == 1);
    CHECK(one(0) == Catch::Approx(1.0));

    // Mixed family on A = I: weights ||S_i' A||_F^2 = 1, 1, 2.
    const Matrix i2 = Matrix::Identity(2, 2);
    const Vector pm = convenient_probabilities(i2, {units[0], units[1], i2});
    CHECK(pm(0) == Catch::Approx(0.25));
    CHECK(pm(1) == Catch::Approx(0.25));
    CHECK(pm(2) == Catch::Approx(0.5));

    // A member hitting only a zero row of A has rank-deficient S'A.
    Matrix az(2, 2);
    az << 0, 0, 1, 1;
    CHECK_THROWS_AS(convenient_probabilities(az, {units[0]}), std::invalid_argument);
    CHECK_THROWS_AS(convenient_probabilities(a, std::vector<Matrix>{}), std::invalid_argument);
}

TEST_CASE("block partition") {
    const auto p52 = block_partition(5, 2);
    REQUIRE(p52.size() == 3);
    CHECK(p52[0] == std::vector<Index>{0, 1});
    CHECK(p52[1] == std::vector<Index>{2, 3});
    CHECK(p52[2] == std::vector<Index>{4});

    const auto p44 = block_partition(4, 4);
    REQUIRE(p44.size() == 1);
    CHECK(p44[0] == std::vector<Index>{0, 1, 2, 3});

    const auto p41 = block_partition(4, 1);
    REQUIRE(p41.size() == 4);
    for (Index i = 0; i < 4; ++i) CHECK(p41[static_cast<std::size_t>(i)] == std::vector<Index>{i});

    CHECK_THROWS_AS(block_partition(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(block_partition(3, 0), std::invalid_argument);
}

TEST_CASE("identity pair draw is deterministic") {
    Rng rng(1);
    const Matrix a = Matrix::Identity(3, 3), b = Matrix::Identity(2, 2);
    const SketchDraw d = draw(SketchSpec{IdentityPair{}}, a, b, rng);
    CHECK(max_abs(Matrix(d.S - Matrix::Identity(3, 3))) == 0.0);
    CHECK(max_abs(Matrix(d.P - Matrix::Identity(2, 2))) == 0.0);
    REQUIRE(d.s_index.has_value());
    REQUIRE(d.p_index.has_value());
}

TEST_CASE("coordinate draw frequencies") {
    Rng rng(42);
    const Matrix a = Matrix::Identity(2, 2), b = Matrix::Identity(2, 2);
    const int trials = 100000;
    int s_hits = 0, p_hits = 0;
    for (int t = 0; t < trials; ++t) {
        const SketchDraw d = draw(SketchSpec{CoordinatePair{}}, a, b, rng);
        REQUIRE(d.S.cols() == 1);
        REQUIRE(d.P.cols() == 1);
        if (*d.s_index == 0) ++s_hits;
        if (*d.p_index == 0) ++p_hits;
    }
    // Each index is a fair coin here; allow three standard deviations.
    const double slack = 3.0 * std::sqrt(0.25 * trials);
    CHECK(std::abs(s_hits - trials / 2.0) < slack);
    CHECK(std::abs(p_hits - trials / 2.0) < slack);
}

TEST_CASE("block draw shapes") {
    Rng rng(7);
    const Matrix a = Matrix::Ones(5, 3), b = Matrix::Ones(3, 4);
    const SketchDraw d = draw(SketchSpec{BlockPartition{2, 3}}, a, b, rng);
    CHECK(d.S.rows() == 5);
    CHECK((d.S.cols() == 2 || d.S.cols() == 1));  // last block holds the remainder
    CHECK(d.P.rows() == 4);
    CHECK((d.P.cols() == 3 || d.P.cols() == 1));
    // Selector columns are orthonormal.
    CHECK(max_abs(Matrix(d.S.transpose() * d.S -
                         Matrix::Identity(d.S.cols(), d.S.cols()))) == 0.0);
}

TEST_CASE("gaussian draw moments") {
    Rng rng(13);
    GaussianPair gp;  // empty covariances mean identity
    const Matrix a = Matrix::Ones(3, 2), b = Matrix::Ones(2, 3);
    const int trials = 20000;
    Vector mean_s = Vector::Zero(3);
    for (int t = 0; t < trials; ++t) {
        const SketchDraw d = draw(SketchSpec{gp}, a, b, rng);
        REQUIRE(d.S.cols() == 1);
        REQUIRE(d.S.rows() == 3);
        REQUIRE(d.P.rows() == 3);
        CHECK_FALSE(d.s_index.has_value());
        mean_s += d.S.col(0);
    }
    mean_s /= trials;
    const double slack = 3.0 / std::sqrt(static_cast<double>(trials));
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(mean_s(i)) < slack);
}

TEST_CASE("gaussian draw with covariance") {
    Rng rng(29);
    Matrix sigma(2, 2);
    sigma << 4, 0, 0, 1;
    GaussianPair gp;
    gp.sigma1 = sigma;
    const Matrix a = Matrix::Ones(2, 2), b = Matrix::Ones(2, 2);
    const int trials = 20000;
    double var0 = 0.0, var1 = 0.0;
    for (int t = 0; t < trials; ++t) {
        const SketchDraw d = draw(SketchSpec{gp}, a, b, rng);
        var0 += d.S(0, 0) * d.S(0, 0);
        var1 += d.S(1, 0) * d.S(1, 0);
    }
    var0 /= trials;
    var1 /= trials;
    // Var of a chi^2_1 estimate is 2 sigma^4 / trials.
    CHECK(std::abs(var0 - 4.0) < 3.0 * std::sqrt(2.0 * 16.0 / trials));
    CHECK(std::abs(var1 - 1.0) < 3.0 * std::sqrt(2.0 / trials));
}

TEST_CASE("categorical sampling validates its input") {
    Rng rng(3);
    Vector good(2);
    good << 0.25, 0.75;
    int ones = 0;
    for (int t = 0; t < 40000; ++t)
        if (sample_categorical(good, rng) == 1) ++ones;
    CHECK(std::abs(ones - 30000) < 3.0 * std::sqrt(40000 * 0.25 * 0.75));

    Vector short_mass(2);
    short_mass << 0.2, 0.2;
    CHECK_THROWS_AS(sample_categorical(short_mass, rng), std::invalid_argument);
    Vector neg(2);
    neg << 1.5, -0.5;
    CHECK_THROWS_AS(sample_categorical(neg, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_categorical(Vector(), rng), std::invalid_argument);
}

TEST_CASE("complete discrete validation") {
    const Matrix a = Matrix::Identity(2, 2), b = Matrix::Identity(2, 2);

    CompleteDiscrete good;
    good.s_members = {detail::unit_column<double>(2, 0), detail::unit_column<double>(2, 1)};
    good.s_probs = Vector::Constant(2, 0.5);
    good.p_members = good.s_members;
    good.p_probs = good.s_probs;
    CHECK(validate_complete_discrete(good, a, b).pass());

    // Dropping one member leaves a coordinate uncovered: the stacked sketch
    // matrix is rank deficient and the condition E[Z] > 0 cannot hold.
    CompleteDiscrete partial = good;
    partial.s_members = {detail::unit_column<double>(2, 0)};
    partial.s_probs = Vector::Constant(1, 1.0);
    const auto rep = validate_complete_discrete(partial, a, b);
    CHECK_FALSE(rep.pass());
    CHECK_FALSE(rep.message.empty());

    CompleteDiscrete misaligned = good;
    misaligned.s_probs = Vector::Constant(3, 1.0 / 3.0);
    CHECK_FALSE(validate_complete_discrete(misaligned, a, b).members_shape_ok);
}

TEST_CASE("sketch kind names") {
    CHECK(std::string(sketch_kind_name(SketchSpec{CoordinatePair{}}.index())) == "coord");
    CHECK(std::string(sketch_kind_name(SketchSpec{RowOnly{}}.index())) == "row");
    CHECK(std::string(sketch_kind_name(SketchSpec{ColOnly{}}.index())) == "col");
    CHECK(std::string(sketch_kind_name(SketchSpec{IdentityPair{}}.index())) == "identity");
    CHECK(std::string(sketch_kind_name(SketchSpec{BlockPartition{}}.index())) == "block");
    CHECK(std::string(sketch_kind_name(SketchSpec{CompleteDiscrete{}}.index())) ==
          "complete-discrete");
    CHECK(std::string(sketch_kind_name(SketchSpec{GaussianPair{}}.index())) == "gauss");
}

TEST_CASE("draws are reproducible per seed") {
    const Matrix a = Matrix::Ones(4, 2), b = Matrix::Ones(2, 4);
    Rng r1(555), r2(555);
    for (int t = 0; t < 50; ++t) {
        const SketchDraw d1 = draw(SketchSpec{GaussianPair{}}, a, b, r1);
        const SketchDraw d2 = draw(SketchSpec{GaussianPair{}}, a, b, r2);
        CHECK(max_abs(Matrix(d1.S - d2.S)) == 0.0);
        CHECK(max_abs(Matrix(d1.P - d2.P)) == 0.0);
    }
}
