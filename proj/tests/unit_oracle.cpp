#include <doctest.h>

#include "bsgs/oracle.hpp"
#include "bsgs/splice.hpp"
#include "test_util.hpp"

using namespace bsgs;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("T = J reduces to the full least squares") {
    GroupedDesign design = testutil::random_design(50, 40, 3, 2);
    OracleResult result = exhaustive_bsgs(design, 3);
    CHECK(result.num_candidates == 1);
    CHECK(result.best_support == group_set_t{0, 1, 2});
    CHECK(result.best_loss == doctest::Approx(fit_least_squares(design, {0, 1, 2}).loss));
}

TEST_CASE("T = 0 evaluates the null model") {
    GroupedDesign design = testutil::random_design(51, 40, 3, 2);
    OracleResult result = exhaustive_bsgs(design, 0);
    CHECK(result.num_candidates == 1);
    CHECK(result.best_support.empty());
    CHECK(result.best_loss == doctest::Approx(design.y.squaredNorm() / 80.0));
}

TEST_CASE("C(6,2) enumerates 15 candidates and dominates splicing") {
    GroupedDesign design = testutil::random_design(52, 60, 6, 2, 0.3);
    OracleResult oracle = exhaustive_bsgs(design, 2);
    CHECK(oracle.num_candidates == 15);

    GSplicingConfig config;
    config.target_size = 2;
    config.max_exchange = 2;
    config.threshold = default_threshold(2, 12, 2, 60);
    FitReport fit = gsplicing_fit(design, config);
    CHECK(oracle.best_loss <= fit.loss + 1e-12 * (1 + fit.loss));

    for (int j : oracle.best_support) {
        CHECK(j >= 0);
        CHECK(j < 6);
    }
}

TEST_CASE("enumeration guard rejects huge problems") {
    GroupedDesign design = testutil::random_design(53, 60, 40, 1);
    CHECK_THROWS_AS(exhaustive_bsgs(design, 20), too_large_error); // C(40,20) ~ 1.4e11
    CHECK_THROWS_AS(exhaustive_bsgs(design, 45), size_error);
}

TEST_CASE("ties resolve to the lexicographically smallest support") {
    // y = 0 makes every support a perfect tie at loss 0
    RandomStream stream(54);
    mat_t x = testutil::random_matrix(stream, 30, 6);
    vec_t y = vec_t::Zero(30);
    GroupedDesign design = preprocess(x, y, contiguous_groups(3, 2));
    OracleResult result = exhaustive_bsgs(design, 2);
    CHECK(result.best_support == group_set_t{0, 1});
    CHECK(result.num_candidates == 3);
}

TEST_CASE("results are identical across repeated runs") {
    GroupedDesign design = testutil::random_design(55, 50, 7, 1);
    OracleResult a = exhaustive_bsgs(design, 3);
    OracleResult b = exhaustive_bsgs(design, 3);
    CHECK(a.best_support == b.best_support);
    CHECK(a.best_loss == b.best_loss);
    CHECK(a.num_candidates == 35);
}

TEST_SUITE_END();
