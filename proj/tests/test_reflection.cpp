#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbp/reflection.hpp"
#include "helpers.hpp"

using namespace cbp;

namespace {

// Random symmetric spec with drifts in [-2, 2].
SystemSpec random_symmetric(testutil::Rng& rng, std::size_t n) {
  SystemSpec s;
  s.size = static_cast<std::int64_t>(n);
  std::vector<double> g(n);
  for (auto& v : g) v = rng.uniform(-2.0, 2.0);
  s.drifts = ParamSeq::of(std::move(g), 0.0);
  std::vector<double> s2(n);
  for (auto& v : s2) v = rng.uniform(0.2, 3.0);
  s.diffusions = ParamSeq::of(std::move(s2), 1.0);
  return s;
}

// Random asymmetric collision weights satisfying the chain constraint.
SystemSpec random_asymmetric(testutil::Rng& rng, std::size_t n) {
  SystemSpec s = random_symmetric(rng, n);
  s.symmetric = false;
  std::vector<double> qp(n), qm(n);
  qp[0] = rng.uniform(0.1, 0.9);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    qm[k] = rng.uniform(0.1, 0.9);
    qp[k + 1] = 1.0 - qm[k];
  }
  qm[n - 1] = rng.uniform(0.1, 0.9);
  s.q_plus = ParamSeq::of(std::move(qp), 0.5);
  s.q_minus = ParamSeq::of(std::move(qm), 0.5);
  return s;
}

}  // namespace

TEST_CASE("reflection data matches the structural definition") {
  const auto rd = build_reflection_data(SystemSpec::atlas(3), 3);
  CHECK(rd.reflection.at(0, 0) == 1.0);
  CHECK(rd.reflection.at(0, 1) == -0.5);
  CHECK(rd.reflection.at(1, 0) == -0.5);
  CHECK(rd.reflection.at(1, 1) == 1.0);
  CHECK(rd.covariance.at(0, 0) == 2.0);
  CHECK(rd.covariance.at(0, 1) == -1.0);
  CHECK(rd.covariance.at(1, 0) == -1.0);
  CHECK(rd.covariance.at(1, 1) == 2.0);

  const auto rd4 = build_reflection_data(SystemSpec::atlas(4), 4);
  CHECK(rd4.mu == std::vector<double>{-1.0, 0.0, 0.0});
}

TEST_CASE("asymmetric weights land on the right diagonals") {
  SystemSpec s;
  s.size = 4;
  s.symmetric = false;
  s.q_plus = ParamSeq::of({0.5, 0.7, 0.6, 0.55}, 0.5);
  s.q_minus = ParamSeq::of({0.3, 0.4, 0.45, 0.5}, 0.5);
  const auto rd = build_reflection_data(s, 4);
  CHECK(rd.reflection.at(0, 1) == -0.4);   // -q^-_2
  CHECK(rd.reflection.at(1, 0) == -0.7);   // -q^+_2
  CHECK(rd.reflection.at(1, 2) == -0.45);  // -q^-_3
  CHECK(rd.reflection.at(2, 1) == -0.6);   // -q^+_3
}

TEST_CASE("tightness of the finite Atlas model") {
  const auto rd = build_reflection_data(SystemSpec::atlas(3), 3);
  const auto t = tightness_check(rd);
  CHECK(t.tight);
  CHECK(t.neg_r_inv_mu[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(t.neg_r_inv_mu[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const auto t4 = tightness_check(build_reflection_data(SystemSpec::atlas(4), 4));
  CHECK(t4.neg_r_inv_mu[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(t4.neg_r_inv_mu[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t4.neg_r_inv_mu[2] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("zero drift is not tight and lands in the dead band") {
  SystemSpec s;
  s.size = 3;
  s.drifts = ParamSeq::constant(0.0);
  const auto t = tightness_check(build_reflection_data(s, 3));
  CHECK_FALSE(t.tight);
  CHECK(t.indeterminate);
}

TEST_CASE("closed form for symmetric collisions") {
  auto v = closed_form_neg_r_inv_mu_symmetric(SystemSpec::atlas(4), 4);
  CHECK(v[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v[2] == doctest::Approx(0.5).epsilon(1e-14));

  SystemSpec flat;
  flat.size = 5;
  flat.drifts = ParamSeq::constant(0.7);
  for (double c : closed_form_neg_r_inv_mu_symmetric(flat, 5))
    CHECK(c == doctest::Approx(0.0));

  SystemSpec dec;
  dec.size = 3;
  dec.drifts = ParamSeq::of({2.0, 1.0, 0.0}, 0.0);
  auto w = closed_form_neg_r_inv_mu_symmetric(dec, 3);
  CHECK(w[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(2.0).epsilon(1e-14));

  SystemSpec asym = SystemSpec::atlas(3);
  asym.symmetric = false;
  asym.q_plus = ParamSeq::constant(0.6);
  asym.q_minus = ParamSeq::constant(0.4);
  CHECK_THROWS_AS(closed_form_neg_r_inv_mu_symmetric(asym, 3), Error);
}

TEST_CASE("solve agrees with the closed form and a dense oracle") {
  testutil::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.index(2, 50);
    const SystemSpec s = random_symmetric(rng, n);
    const auto rd = build_reflection_data(s, n);
    const auto t = tightness_check(rd);
    const auto closed = closed_form_neg_r_inv_mu_symmetric(s, n);
    REQUIRE(t.neg_r_inv_mu.size() == closed.size());
    for (std::size_t k = 0; k < closed.size(); ++k) {
      const double scale = std::max({1.0, std::abs(closed[k]), std::abs(t.neg_r_inv_mu[k])});
      CHECK(std::abs(closed[k] - t.neg_r_inv_mu[k]) <= 1e-10 * scale);
    }
    if (n <= 20) {
      const std::size_t d = n - 1;
      const auto rinv = testutil::dense_inverse(rd.reflection.dense_row_major(), d);
      const auto v = testutil::dense_multiply(rinv, rd.mu, d);
      for (std::size_t k = 0; k < d; ++k)
        CHECK(std::abs(-v[k] - t.neg_r_inv_mu[k]) <= 1e-9);
    }
  }
}

TEST_CASE("R is an M-matrix: nonnegative inverse with positive diagonal") {
  testutil::Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng.index(3, 20);
    const SystemSpec s = random_asymmetric(rng, n);
    const auto rd = build_reflection_data(s, n);
    const std::size_t d = n - 1;
    const auto rinv = testutil::dense_inverse(rd.reflection.dense_row_major(), d);
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(rinv[i * d + i] > 0.0);
      for (std::size_t j = 0; j < d; ++j) CHECK(rinv[i * d + j] >= -1e-12);
    }
  }
}

TEST_CASE("skew symmetry: linear diffusions under symmetric collisions") {
  SystemSpec lin;
  lin.size = 3;
  lin.drifts = ParamSeq::of({1.0, 0.0, 0.0}, 0.0);
  lin.diffusions = ParamSeq::of({1.0, 2.0, 3.0}, 3.0);
  CHECK(skew_symmetry_check(lin, 3));

  SystemSpec bad = lin;
  bad.diffusions = ParamSeq::of({1.0, 1.0, 3.0}, 3.0);
  CHECK_FALSE(skew_symmetry_check(bad, 3));

  CHECK(skew_symmetry_check(SystemSpec::atlas(2), 2));  // vacuous at N = 2
}

TEST_CASE("per-rank and matrix skew-symmetry criteria agree on random specs") {
  testutil::Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.index(3, 30);
    const SystemSpec s =
        trial % 2 == 0 ? random_symmetric(rng, n) : random_asymmetric(rng, n);
    CHECK_NOTHROW(skew_symmetry_check(s, n));  // throws exactly on disagreement
  }
}

TEST_CASE("stationary rates of the finite Atlas model") {
  const auto law = stationary_rates(SystemSpec::atlas(4), 4);
  REQUIRE(law.defined());
  for (std::size_t k = 1; k <= 3; ++k)
    CHECK(law.rates[k - 1] ==
          doctest::Approx(2.0 * (4.0 - double(k)) / 4.0).epsilon(1e-12));

  const auto m2 = stationary_rates(SystemSpec::m_atlas(6, 2), 6);
  REQUIRE(m2.defined());
  CHECK(m2.rates[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  SystemSpec flat;
  flat.size = 4;
  flat.drifts = ParamSeq::constant(0.0);
  const auto none = stationary_rates(flat, 4);
  CHECK_FALSE(none.tight);
  CHECK(none.skew_symmetric);
  CHECK(none.rates.empty());
}

TEST_CASE("rates grow componentwise with the truncation size") {
  for (std::size_t m : {1u, 2u, 3u}) {
    std::vector<double> prev;
    for (std::size_t n = 4; n <= 64; n *= 2) {
      const auto law = stationary_rates(SystemSpec::m_atlas(n, m), n);
      REQUIRE(law.defined());
      for (std::size_t k = 0; k < prev.size(); ++k)
        CHECK(law.rates[k] >= prev[k] - 1e-12);
      prev = law.rates;
    }
  }
}
