#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssma/advantage.hpp"
#include "ssma/estimator_lab.hpp"
#include "ssma/rng.hpp"

#include "oracles.hpp"

using namespace ssma;

TEST_CASE("acloo: exact spot values from the leave-one-out formula") {
  Vector q3(3);
  q3 << 1.0, 0.5, 0.0;
  const Vector a3 = acloo_advantages(q3);
  CHECK(a3(0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(a3(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a3(2) == doctest::Approx(-0.75).epsilon(1e-12));

  Vector q2(2);
  q2 << 0.8, 0.3;
  const Vector a2 = acloo_advantages(q2);
  CHECK(a2(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a2(1) == doctest::Approx(-0.5).epsilon(1e-12));

  const Vector equal = acloo_advantages(Vector::Constant(5, 3.25));
  CHECK(equal.cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(acloo_advantages(Vector::Ones(1)), ContractError);
}

TEST_CASE("acloo: zero sum, brute-force equality, permutation equivariance") {
  RandomStream rng(606);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + rng.below_int(15);
    Vector q(k);
    for (int i = 0; i < k; ++i) q(i) = rng.uniform(-5.0, 5.0);
    const Vector adv = acloo_advantages(q);

    const Real bound = 1e-12 * k * std::max<Real>(1.0, q.cwiseAbs().maxCoeff());
    CHECK(std::abs(adv.sum()) <= bound);

    const Vector brute = ssma::testing::brute_force_loo(q);
    CHECK((adv - brute).cwiseAbs().maxCoeff() <= 1e-12);

    // Permuting the group permutes the advantages identically.
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = k; i > 1; --i) std::swap(perm[i - 1], perm[rng.below_int(i)]);
    Vector permuted_q(k);
    for (int i = 0; i < k; ++i) permuted_q(i) = q(perm[i]);
    const Vector permuted_adv = acloo_advantages(permuted_q);
    for (int i = 0; i < k; ++i) {
      CHECK(std::abs(permuted_adv(i) - adv(perm[i])) <= 1e-12);
    }
  }
}

TEST_CASE("acloo shift invariance holds to 1e-12 up to |C| = 1e6") {
  RandomStream rng(607);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + rng.below_int(15);
    Vector q(k);
    for (int i = 0; i < k; ++i) {
      q(i) = static_cast<Real>(rng.below(1u << 26)) * 0x1.0p-26;
    }
    const Real magnitude = static_cast<Real>(rng.below((1u << 20) + 1));
    const Real shift = (trial % 2 == 0 ? 1.0 : -1.0) * magnitude;
    const Vector base = acloo_advantages(q);
    const Vector shifted = acloo_advantages(q.array() + shift);
    CHECK((base - shifted).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("acloo over QGroups stamps records and validates inputs") {
  QGroup group;
  group.features = Vector::Ones(2);
  group.actions = {2, 0, 1};
  group.q_values = Vector::Zero(3);
  group.q_values << 1.0, 0.5, 0.0;
  group.old_logprobs = Vector::Constant(3, -1.0);
  const std::vector<AdvantageRecord> records = acloo(group);
  CHECK(records.size() == 3);
  CHECK(records[0].action == 2);
  CHECK(records[0].advantage == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(records[0].estimator == EstimatorKind::acloo);

  QGroup bad = group;
  bad.actions = {1};
  bad.q_values = Vector::Ones(1);
  bad.old_logprobs = Vector::Ones(1);
  CHECK_THROWS_AS(acloo(bad), ContractError);
}

TEST_CASE("grpo normalization: direct arithmetic and degenerate groups") {
  Vector r(4);
  r << 1, 0, 0, 1;
  const Vector a = grpo_normalize(r, 0.0);
  CHECK(a(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a(1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(a(2) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(a(3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(a.sum()) <= 1e-12);

  const Vector zeros = grpo_normalize(Vector::Constant(4, 1.0), 1e-4);
  CHECK(zeros.cwiseAbs().maxCoeff() == 0.0);

  Vector r2(2);
  r2 << 1, 0;
  const Vector a2 = grpo_normalize(r2, 0.0);
  CHECK(a2(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a2(1) == doctest::Approx(-1.0).epsilon(1e-12));

  // Bessel-corrected std shrinks the advantages.
  const Vector sample = grpo_normalize(r2, 0.0, true);
  CHECK(sample(0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  CHECK_THROWS_AS(grpo_normalize(Vector::Ones(1), 0.0), ContractError);
}

TEST_CASE("rloo is the same algebra as acloo") {
  RandomStream rng(11);
  Vector r(4);
  r << 1, 0, 0, 1;
  const Vector a = rloo_rewards(r);
  CHECK(a(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(a(1) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(rloo_rewards(Vector::Constant(6, 2.0)).cwiseAbs().maxCoeff() <= 1e-12);
  for (int trial = 0; trial < 50; ++trial) {
    Vector q(5);
    for (int i = 0; i < 5; ++i) q(i) = rng.uniform(-2, 2);
    CHECK(rloo_rewards(q) == acloo_advantages(q));
  }
}

TEST_CASE("mc value advantages subtract elementwise") {
  Vector returns(1), values(1);
  returns << 1.2;
  values << 1.2;
  CHECK(mc_value_advantage(returns, values)(0) == 0.0);
  returns(0) = 1.3805;
  values(0) = 1.0;
  CHECK(mc_value_advantage(returns, values)(0) ==
        doctest::Approx(0.3805).epsilon(1e-12));
  CHECK(mc_value_advantage(returns, Vector::Zero(1))(0) == returns(0));
  CHECK_THROWS_AS(mc_value_advantage(Vector::Ones(2), Vector::Ones(3)),
                  ContractError);
}

TEST_CASE("exact bandit gradient: closed form and finite differences") {
  BanditOracle uniform_const;
  uniform_const.probs = Vector::Constant(4, 0.25);
  uniform_const.q = Vector::Constant(4, 2.0);
  CHECK(exact_gradient(uniform_const).cwiseAbs().maxCoeff() <= 1e-15);

  BanditOracle two;
  two.probs = Vector::Constant(2, 0.5);
  two.q = Vector::Zero(2);
  two.q << 1.0, 0.0;
  const Vector g2 = exact_gradient(two);
  CHECK(g2(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g2(1) == doctest::Approx(-0.25).epsilon(1e-12));

  BanditOracle three;
  three.probs = Vector::Constant(3, 1.0 / 3.0);
  three.q = Vector::Zero(3);
  three.q << 3.0, 0.0, 0.0;
  const Vector g3 = exact_gradient(three);
  CHECK(g3(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(g3(1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(g3(2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

  // Finite differences of J(z) = sum_a softmax(z)_a Q_a at z = log(pi).
  RandomStream rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    const BanditOracle oracle = random_oracle(derive_seed(3, trial), 2, 6);
    Matrix logits(oracle.arms(), 1);
    for (int a = 0; a < oracle.arms(); ++a) logits(a, 0) = std::log(oracle.probs(a));
    const Matrix numeric = ssma::testing::finite_difference(
        logits, [&](const Matrix& z) {
          Vector p = z.col(0);
          const Real zmax = p.maxCoeff();
          p = (p.array() - zmax).exp();
          p /= p.sum();
          return p.dot(oracle.q);
        });
    const Vector analytic = exact_gradient(oracle);
    CHECK(ssma::testing::relative_error(analytic.matrix(), numeric.col(0)) < 1e-5);
  }
}

TEST_CASE("gradient_stats: determinism, worker invariance, validation") {
  const BanditOracle oracle = random_oracle(42, 3, 6);
  const GradientStats a =
      gradient_stats(EstimatorKind::acloo, oracle, 4, 20000, 7, 1);
  const GradientStats b =
      gradient_stats(EstimatorKind::acloo, oracle, 4, 20000, 7, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(a.samples == 20000);

  CHECK_THROWS_AS(gradient_stats(EstimatorKind::acloo, oracle, 4, 10, 7, 1),
                  ConfigError);
  CHECK_THROWS_AS(gradient_stats(EstimatorKind::acloo, oracle, 1, 5000, 7, 1),
                  ContractError);
  CHECK_THROWS_AS(estimator_from_name("bogus"), ConfigError);
}

TEST_CASE("estimator battery: unbiased within 3 SE, acloo variance below no-baseline") {
  LabConfig config;
  config.oracle_count = 6;
  config.k_values = {2, 4};
  config.samples = 40000;
  config.seed = 90210;
  config.worker_count = 2;
  const LabReport report = run_estimator_lab(config);
  CHECK(report.unbiasedness_pass);
  CHECK(report.shift_invariance_pass);
  CHECK(report.variance_ordering_pass);
  CHECK(report.acloo_mean_variance < report.no_baseline_mean_variance);

  const std::string csv = lab_rows_to_csv(report.rows);
  CHECK(csv.find("estimator,oracle_id,k,samples,bias_norm,mean_variance,pass") == 0);
  CHECK(csv.find("acloo") != std::string::npos);
  CHECK(csv.find("no_baseline") != std::string::npos);
}
