#include <doctest.h>

#include "bsgs/grouped_design.hpp"
#include "test_util.hpp"

using namespace bsgs;

TEST_SUITE_BEGIN("grouped_design");

TEST_CASE("validate_groups accepts a partition and derives sizes") {
    // groups {0,1},{2} over p=3
    GroupStructure s = validate_groups({{0, 1}, {2}}, 3);
    CHECK(s.num_groups() == 2);
    CHECK(s.num_predictors() == 3);
    CHECK(s.min_group_size() == 1);
    CHECK(s.max_group_size() == 2);
    CHECK(s.predictors_in({0, 1}) == 3);
}

TEST_CASE("validate_groups rejects overlap, gaps and empty groups") {
    CHECK_THROWS_AS(validate_groups({{0}, {0, 1}}, 2), overlap_error);
    CHECK_THROWS_AS(validate_groups({{0}, {2}}, 3), coverage_error);
    CHECK_THROWS_AS(validate_groups({{0, 1}, {}}, 2), empty_group_error);
    CHECK_THROWS_AS(validate_groups({}, 2), shape_error);
    CHECK_THROWS_AS(validate_groups({{0}}, 0), shape_error);
}

TEST_CASE("validate_groups sorts indices inside each group") {
    GroupStructure s = validate_groups({{2, 0}, {1}}, 3);
    CHECK(s.columns_of(0) == std::vector<index_t>{0, 2});
}

TEST_CASE("preprocess centers and orthonormalizes every group block") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GroupedDesign design = testutil::random_design(seed, 50, 4, 3);
        CHECK(testutil::orthonormality_gap(design) <= 1e-10);
        CHECK(std::abs(design.y.mean()) <= 1e-10 * (1 + design.y.cwiseAbs().maxCoeff()));
        for (index_t c = 0; c < design.x.cols(); ++c)
            CHECK(std::abs(design.x.col(c).mean()) <= 1e-10);
    }
}

TEST_CASE("single-column group becomes x sqrt(n)/||x||") {
    RandomStream stream(11);
    mat_t x = testutil::random_matrix(stream, 30, 1);
    vec_t y = testutil::random_vector(stream, 30);
    GroupedDesign design = preprocess(x, y, validate_groups({{0}}, 1));
    vec_t centered = x.col(0).array() - x.col(0).mean();
    vec_t expected = centered * std::sqrt(30.0) / centered.norm();
    CHECK((design.x.col(0) - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("an already-orthonormal block is preserved up to column signs") {
    RandomStream stream(12);
    const index_t n = 40;
    mat_t raw = testutil::random_matrix(stream, n, 3);
    vec_t y = testutil::random_vector(stream, n);
    GroupedDesign pre = preprocess(raw, y, validate_groups({{0, 1, 2}}, 3));
    // pre.x is exactly orthonormalized and centered; feed it back in.
    GroupedDesign again = preprocess(pre.x, y, validate_groups({{0, 1, 2}}, 3));
    for (index_t c = 0; c < 3; ++c) {
        const double same = (again.x.col(c) - pre.x.col(c)).norm();
        const double flipped = (again.x.col(c) + pre.x.col(c)).norm();
        CHECK(std::min(same, flipped) <= 1e-8);
    }
    // transform must be a signed identity
    mat_t t = again.group_transforms[0];
    for (index_t i = 0; i < 3; ++i)
        for (index_t j = 0; j < 3; ++j) {
            if (i == j) CHECK(std::abs(std::abs(t(i, j)) - 1.0) <= 1e-8);
            else CHECK(std::abs(t(i, j)) <= 1e-8);
        }
}

TEST_CASE("back-transform reproduces fitted values in the original basis") {
    for (std::uint64_t seed = 30; seed < 40; ++seed) {
        RandomStream stream(mix64(seed));
        const index_t n = 50;
        mat_t x = testutil::random_matrix(stream, n, 3);
        vec_t y = testutil::random_vector(stream, n);
        GroupedDesign design = preprocess(x, y, validate_groups({{0, 1, 2}}, 3));
        vec_t beta_orth = testutil::random_vector(stream, 3);
        vec_t beta_orig = design.to_original(beta_orth);
        mat_t x_centered = x.rowwise() - x.colwise().mean();
        vec_t fitted_orth = design.x * beta_orth;
        vec_t fitted_orig = x_centered * beta_orig;
        CHECK((fitted_orth - fitted_orig).norm() <= 1e-8 * fitted_orth.norm());
    }
}

TEST_CASE("forward then backward transform is the identity") {
    GroupedDesign design = testutil::random_design(77, 60, 3, 4);
    RandomStream stream(99);
    vec_t beta = testutil::random_vector(stream, design.structure.num_predictors());
    vec_t round_trip = design.to_orthonormal(design.to_original(beta));
    CHECK((round_trip - beta).cwiseAbs().maxCoeff() <= 1e-10 * (1 + beta.cwiseAbs().maxCoeff()));
}

TEST_CASE("preprocess rejects rank-deficient group blocks") {
    RandomStream stream(13);
    mat_t x = testutil::random_matrix(stream, 20, 3);
    x.col(2) = 2.0 * x.col(1); // collinear inside the group
    vec_t y = testutil::random_vector(stream, 20);
    CHECK_THROWS_AS(preprocess(x, y, validate_groups({{0, 1, 2}}, 3)), rank_error);

    // a constant column centers to zero
    mat_t x2 = testutil::random_matrix(stream, 20, 2);
    x2.col(0).setConstant(3.5);
    CHECK_THROWS_AS(preprocess(x2, y, validate_groups({{0, 1}}, 2)), rank_error);

    // a group wider than the sample count can never be full rank
    mat_t x3 = testutil::random_matrix(stream, 4, 5);
    vec_t y3 = testutil::random_vector(stream, 4);
    CHECK_THROWS_AS(preprocess(x3, y3, validate_groups({{0, 1, 2, 3, 4}}, 5)), rank_error);
}

TEST_CASE("near-collinear blocks above the tolerance still orthonormalize") {
    RandomStream stream(14);
    mat_t x = testutil::random_matrix(stream, 50, 3);
    x.col(2) = x.col(1) + 1e-5 * x.col(2); // ill-conditioned but full rank
    vec_t y = testutil::random_vector(stream, 50);
    GroupedDesign design = preprocess(x, y, validate_groups({{0, 1, 2}}, 3));
    CHECK(testutil::orthonormality_gap(design) <= 1e-10);
}

TEST_CASE("preprocess validates shapes") {
    RandomStream stream(15);
    mat_t x = testutil::random_matrix(stream, 10, 2);
    vec_t y = testutil::random_vector(stream, 9);
    CHECK_THROWS_AS(preprocess(x, y, validate_groups({{0, 1}}, 2)), shape_error);
    vec_t y1 = testutil::random_vector(stream, 1);
    CHECK_THROWS_AS(preprocess(mat_t::Ones(1, 2), y1, validate_groups({{0, 1}}, 2)), shape_error);
    vec_t y10 = testutil::random_vector(stream, 10);
    CHECK_THROWS_AS(preprocess(x, y10, validate_groups({{0, 1, 2}}, 3)), shape_error);
}

TEST_CASE("intercept recovers the raw-coordinate fit") {
    RandomStream stream(16);
    const index_t n = 80;
    mat_t x = testutil::random_matrix(stream, n, 4).array() + 2.0; // non-centered columns
    vec_t beta_true = testutil::random_vector(stream, 4);
    vec_t y = (x * beta_true).array() + 5.0;
    GroupedDesign design = preprocess(x, y, validate_groups({{0, 1}, {2, 3}}, 4));
    vec_t beta_orth = design.to_orthonormal(beta_true);
    vec_t beta_back = design.to_original(beta_orth);
    const double intercept = design.intercept_for(beta_back);
    vec_t predicted = (x * beta_back).array() + intercept;
    CHECK((predicted - y).cwiseAbs().maxCoeff() <= 1e-8 * y.cwiseAbs().maxCoeff());
}

TEST_SUITE_END();
