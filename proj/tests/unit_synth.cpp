#include <doctest.h>

#include <cmath>

#include "bsgs/rng.hpp"
#include "bsgs/synth.hpp"
#include "test_util.hpp"

using namespace bsgs;

namespace {

double column_corr(const mat_t& m, index_t a, index_t b) {
    vec_t ca = m.col(a).array() - m.col(a).mean();
    vec_t cb = m.col(b).array() - m.col(b).mean();
    return ca.dot(cb) / (ca.norm() * cb.norm());
}

SyntheticSpec base_spec() {
    SyntheticSpec spec;
    spec.n = 100;
    spec.num_groups = 4;
    spec.group_size = 3;
    spec.rho = 0.5;
    spec.structure = CorrStructure::exponential;
    spec.sigma1 = 1.0;
    spec.s_star = 2;
    spec.seed = 42;
    return spec;
}

} // namespace

TEST_SUITE_BEGIN("synth");

TEST_CASE("inverse normal CDF hits known quantiles") {
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inverse_normal_cdf(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
    CHECK_THROWS_AS(inverse_normal_cdf(0.0), domain_error);
    CHECK_THROWS_AS(inverse_normal_cdf(1.0), domain_error);
}

TEST_CASE("normal draws have the right moments") {
    RandomStream stream(9001);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = stream.next_normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("substreams with different names are distinct, same name identical") {
    RandomStream a = RandomStream::substream(7, "latent");
    RandomStream b = RandomStream::substream(7, "latent");
    RandomStream c = RandomStream::substream(7, "noise");
    CHECK(a.next() == b.next());
    RandomStream a2 = RandomStream::substream(7, "latent");
    CHECK(a2.next() != c.next());
}

TEST_CASE("rho = 0 gives independent standard normal latents") {
    SyntheticSpec spec = base_spec();
    spec.rho = 0;
    spec.n = 30000;
    spec.num_groups = 3;
    mat_t latent = gen_latent(spec);
    CHECK(std::abs(latent.col(0).squaredNorm() / spec.n - 1.0) < 0.03);
    CHECK(std::abs(column_corr(latent, 0, 1)) < 0.03);
    CHECK(std::abs(column_corr(latent, 0, 2)) < 0.03);
}

TEST_CASE("constant structure yields flat correlation") {
    SyntheticSpec spec = base_spec();
    spec.structure = CorrStructure::constant;
    spec.rho = 0.6;
    spec.num_groups = 3;
    spec.n = 100000;
    mat_t latent = gen_latent(spec);
    CHECK(column_corr(latent, 0, 1) == doctest::Approx(0.6).epsilon(0.035));
    CHECK(column_corr(latent, 0, 2) == doctest::Approx(0.6).epsilon(0.035));
    CHECK(column_corr(latent, 1, 2) == doctest::Approx(0.6).epsilon(0.035));
}

TEST_CASE("exponential structure decays with distance") {
    SyntheticSpec spec = base_spec();
    spec.rho = 0.9;
    spec.num_groups = 3;
    spec.n = 100000;
    mat_t latent = gen_latent(spec);
    CHECK(column_corr(latent, 0, 1) == doctest::Approx(0.9).epsilon(0.025));
    CHECK(column_corr(latent, 0, 2) == doctest::Approx(0.81).epsilon(0.025));
}

TEST_CASE("rho = 1 is rejected as non-positive-definite") {
    SyntheticSpec spec = base_spec();
    spec.structure = CorrStructure::constant;
    spec.rho = 1.0;
    CHECK_THROWS_AS(gen_latent(spec), cholesky_error);
}

TEST_CASE("design columns have unit variance and within-group correlation 1/2") {
    SyntheticSpec spec = base_spec();
    spec.n = 100000;
    spec.num_groups = 2;
    spec.group_size = 2;
    spec.rho = 0;
    mat_t design = gen_design(spec, gen_latent(spec));
    CHECK(design.cols() == 4);
    for (index_t c = 0; c < 4; ++c) {
        vec_t col = design.col(c).array() - design.col(c).mean();
        CHECK(col.squaredNorm() / spec.n == doctest::Approx(1.0).epsilon(0.02));
    }
    CHECK(column_corr(design, 0, 1) == doctest::Approx(0.5).epsilon(0.04));
    CHECK(column_corr(design, 2, 3) == doctest::Approx(0.5).epsilon(0.04));
    // rho = 0: across groups uncorrelated
    CHECK(std::abs(column_corr(design, 0, 2)) < 0.02);
}

TEST_CASE("gen_beta zeroes inactive groups and is reproducible") {
    SyntheticSpec spec = base_spec();
    auto [support1, beta1] = gen_beta(spec);
    auto [support2, beta2] = gen_beta(spec);
    CHECK(support1 == support2);
    CHECK((beta1 - beta2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(static_cast<int>(support1.size()) == spec.s_star);
    for (int j = 0; j < spec.num_groups; ++j) {
        const bool active = contains(support1, j);
        double norm = 0;
        for (index_t k = 0; k < spec.group_size; ++k)
            norm += std::abs(beta1[j * spec.group_size + k]);
        if (active) CHECK(norm > 0);
        else CHECK(norm == 0.0);
    }
}

TEST_CASE("explicit support and fixed coefficients are honored") {
    SyntheticSpec spec = base_spec();
    spec.true_support = group_set_t{1, 3};
    spec.fixed_coefficient = 2.0;
    auto [support, beta] = gen_beta(spec);
    CHECK(support == group_set_t{1, 3});
    for (index_t k = 0; k < 3; ++k) {
        CHECK(beta[3 + k] == 2.0);
        CHECK(beta[9 + k] == 2.0);
        CHECK(beta[k] == 0.0);
    }
}

TEST_CASE("gen_response without noise is exact") {
    SyntheticSpec spec = base_spec();
    GroundTruth truth = make_dataset(spec);
    RandomStream eps = RandomStream::substream(spec.seed, "epsilon");
    vec_t y0 = gen_response(truth.design_raw, truth.beta_star, 0.0, eps);
    CHECK((y0 - truth.design_raw * truth.beta_star).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pure noise response has sd close to sigma1") {
    SyntheticSpec spec = base_spec();
    spec.n = 100000;
    spec.s_star = 0;
    spec.sigma1 = 2.5;
    GroundTruth truth = make_dataset(spec);
    const double sd = std::sqrt(truth.response.squaredNorm() / spec.n);
    CHECK(sd == doctest::Approx(2.5).epsilon(0.02));
}

TEST_CASE("datasets replay bit-for-bit and sigma1 does not perturb the design") {
    SyntheticSpec spec = base_spec();
    GroundTruth a = make_dataset(spec);
    GroundTruth b = make_dataset(spec);
    CHECK((a.design_raw - b.design_raw).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.response - b.response).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.beta_star - b.beta_star).cwiseAbs().maxCoeff() == 0.0);

    SyntheticSpec noisier = spec;
    noisier.sigma1 = 9.0;
    GroundTruth c = make_dataset(noisier);
    CHECK((a.design_raw - c.design_raw).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.beta_star - c.beta_star).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.true_support == c.true_support);
    CHECK((a.response - c.response).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("iid structure draws the design directly") {
    SyntheticSpec spec = base_spec();
    spec.structure = CorrStructure::iid;
    spec.n = 50000;
    spec.num_groups = 2;
    spec.group_size = 2;
    GroundTruth truth = make_dataset(spec);
    CHECK(std::abs(column_corr(truth.design_raw, 0, 1)) < 0.02); // no within-group correlation
    vec_t col = truth.design_raw.col(0);
    CHECK(std::abs(col.squaredNorm() / spec.n - 1.0) < 0.02);
}

TEST_CASE("spec validation") {
    SyntheticSpec spec = base_spec();
    spec.rho = 1.5;
    CHECK_THROWS_AS(validate_spec(spec), domain_error);
    spec = base_spec();
    spec.s_star = 9;
    CHECK_THROWS_AS(validate_spec(spec), size_error);
    spec = base_spec();
    spec.true_support = group_set_t{0};
    CHECK_THROWS_AS(validate_spec(spec), size_error); // size differs from s_star
}

TEST_SUITE_END();
