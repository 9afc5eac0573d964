#include "ssma/estimator_lab.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "ssma/rng.hpp"

namespace ssma {

void BanditOracle::validate() const {
  if (arms() < 2) throw ConfigError("bandit oracle needs >= 2 arms");
  if (arms() > 10000) throw ConfigError("bandit oracle arm count too large");
  if ((probs.array() <= 0).any()) throw ConfigError("probabilities must be positive");
  if (std::abs(probs.sum() - 1.0) > 1e-9) {
    throw ConfigError("probabilities must sum to 1");
  }
  if (q.size() != probs.size()) throw ConfigError("probs/q length mismatch");
}

BanditOracle random_oracle(std::uint64_t seed, int min_arms, int max_arms) {
  RandomStream rng(seed);
  const int arms = min_arms + rng.below_int(max_arms - min_arms + 1);
  BanditOracle oracle;
  oracle.probs = Vector::Zero(arms);
  oracle.q = Vector::Zero(arms);
  for (int a = 0; a < arms; ++a) {
    oracle.probs(a) = -std::log(1.0 - rng.uniform01());
    oracle.q(a) = rng.uniform01();
  }
  // Dirichlet(1) point mixed with uniform mass: arms below a few percent
  // probability get too few hits for the battery's normal-theory
  // 3-standard-error checks to be meaningful, so probabilities are kept
  // off the simplex boundary.
  oracle.probs = 0.7 * oracle.probs / oracle.probs.sum() +
                 Vector::Constant(arms, 0.3 / arms);
  oracle.validate();
  return oracle;
}

Vector exact_gradient(const BanditOracle& oracle) {
  oracle.validate();
  const Real j = oracle.probs.dot(oracle.q);
  return oracle.probs.array() * (oracle.q.array() - j);
}

namespace {

constexpr std::int64_t kShardSize = 4096;

struct Welford {
  Vector mean;
  Vector m2;
  std::int64_t count = 0;

  explicit Welford(int dim) : mean(Vector::Zero(dim)), m2(Vector::Zero(dim)) {}

  void add(const Vector& x) {
    ++count;
    const Vector delta = x - mean;
    mean += delta / static_cast<Real>(count);
    m2 += delta.cwiseProduct(x - mean);
  }

  // Chan's pairwise combination; applied in shard-index order.
  void merge(const Welford& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const Real n1 = static_cast<Real>(count);
    const Real n2 = static_cast<Real>(other.count);
    const Vector delta = other.mean - mean;
    const Real total = n1 + n2;
    mean += delta * (n2 / total);
    m2 += other.m2 + delta.cwiseProduct(delta) * (n1 * n2 / total);
    count += other.count;
  }
};

Vector single_sample_gradient(EstimatorKind estimator, const BanditOracle& oracle,
                              int k, RandomStream& rng) {
  switch (estimator) {
    case EstimatorKind::no_baseline: {
      const int a = rng.categorical(oracle.probs);
      Vector g = -oracle.q(a) * oracle.probs;
      g(a) += oracle.q(a);
      return g;
    }
    case EstimatorKind::acloo:
    case EstimatorKind::rloo: {
      Vector q_group(k);
      int first = 0;
      for (int i = 0; i < k; ++i) {
        const int a = rng.categorical(oracle.probs);
        if (i == 0) first = a;
        q_group(i) = oracle.q(a);
      }
      const Real advantage = acloo_advantages(q_group)(0);
      Vector g = -advantage * oracle.probs;
      g(first) += advantage;
      return g;
    }
    default:
      throw ConfigError(std::string("estimator not supported by the lab: ") +
                        estimator_name(estimator));
  }
}

}  // namespace

GradientStats gradient_stats(EstimatorKind estimator, const BanditOracle& oracle,
                             int k, std::int64_t num_samples, std::uint64_t seed,
                             int worker_count) {
  oracle.validate();
  if (num_samples < 1000) throw ConfigError("gradient_stats needs >= 1000 samples");
  if (k < 1) throw ConfigError("k must be >= 1");
  if ((estimator == EstimatorKind::acloo || estimator == EstimatorKind::rloo) &&
      k < 2) {
    throw ContractError("leave-one-out estimators need k >= 2");
  }

  const int shards = static_cast<int>((num_samples + kShardSize - 1) / kShardSize);
  std::vector<Welford> partial(shards, Welford(oracle.arms()));

  auto run_shard = [&](int s) {
    RandomStream rng(derive_seed(seed, 0x57u, s));
    const std::int64_t begin = s * kShardSize;
    const std::int64_t end = std::min(num_samples, begin + kShardSize);
    for (std::int64_t i = begin; i < end; ++i) {
      partial[s].add(single_sample_gradient(estimator, oracle, k, rng));
    }
  };

  const int workers = std::max(1, std::min(worker_count, shards));
  if (workers == 1) {
    for (int s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&]() {
        for (int s = next.fetch_add(1); s < shards; s = next.fetch_add(1)) {
          run_shard(s);
        }
      });
    }
    for (std::thread& t : threads) t.join();
  }

  Welford total(oracle.arms());
  for (int s = 0; s < shards; ++s) total.merge(partial[s]);

  GradientStats stats;
  stats.mean = total.mean;
  stats.variance = total.m2 / static_cast<Real>(total.count - 1);
  stats.samples = total.count;
  return stats;
}

LabReport run_estimator_lab(const LabConfig& config) {
  if (config.samples < 1000) throw ConfigError("lab.samples must be >= 1000");
  if (config.oracle_count < 1) throw ConfigError("lab.oracles must be >= 1");
  if (config.min_arms < 2 || config.max_arms < config.min_arms) {
    throw ConfigError("invalid lab arm range");
  }
  if (config.k_values.empty()) throw ConfigError("lab.k_values must be non-empty");

  LabReport report;
  report.unbiasedness_pass = true;
  Real acloo_var_sum = 0.0;
  Real nb_var_sum = 0.0;
  int acloo_rows = 0;
  int nb_rows = 0;

  for (int o = 0; o < config.oracle_count; ++o) {
    const BanditOracle oracle =
        random_oracle(derive_seed(config.seed, 0x6fu, o), config.min_arms,
                      config.max_arms);
    const Vector exact = exact_gradient(oracle);
    for (EstimatorKind estimator :
         {EstimatorKind::acloo, EstimatorKind::no_baseline}) {
      for (int k : config.k_values) {
        if (estimator == EstimatorKind::no_baseline && k != config.k_values.front()) {
          continue;  // k has no effect without a group baseline
        }
        const GradientStats stats = gradient_stats(
            estimator, oracle, k, config.samples,
            derive_seed(config.seed, static_cast<std::uint64_t>(o),
                        static_cast<std::uint64_t>(k),
                        estimator == EstimatorKind::acloo ? 0u : 1u),
            config.worker_count);
        LabRow row;
        row.estimator = estimator;
        row.oracle_id = o;
        row.k = k;
        row.samples = stats.samples;
        row.bias_norm = (stats.mean - exact).norm();
        row.mean_variance = stats.variance.mean();
        row.max_z = 0.0;
        for (int c = 0; c < oracle.arms(); ++c) {
          const Real se =
              std::sqrt(stats.variance(c) / static_cast<Real>(stats.samples));
          const Real z = se > 0 ? std::abs(stats.mean(c) - exact(c)) / se
                                : std::abs(stats.mean(c) - exact(c)) / 1e-300;
          row.max_z = std::max(row.max_z, z);
        }
        row.pass = row.max_z <= 3.0;
        report.unbiasedness_pass = report.unbiasedness_pass && row.pass;
        if (estimator == EstimatorKind::acloo) {
          acloo_var_sum += row.mean_variance;
          ++acloo_rows;
        } else {
          nb_var_sum += row.mean_variance;
          ++nb_rows;
        }
        report.rows.push_back(row);
      }
    }
  }

  report.acloo_mean_variance = acloo_var_sum / std::max(1, acloo_rows);
  report.no_baseline_mean_variance = nb_var_sum / std::max(1, nb_rows);
  report.variance_ordering_pass =
      report.acloo_mean_variance < report.no_baseline_mean_variance;

  // Shift-invariance battery: leave-one-out advantages are invariant to a common
  // shift. Dyadic values keep the shifted inputs exactly representable so
  // the 1e-12 tolerance tests the algebra, not input rounding.
  report.shift_invariance_pass = true;
  RandomStream rng(derive_seed(config.seed, 0x5349u));
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + rng.below_int(15);
    Vector q(k);
    for (int i = 0; i < k; ++i) {
      q(i) = static_cast<Real>(rng.below(1u << 26)) * 0x1.0p-26;
    }
    const Real shift_magnitude =
        static_cast<Real>(rng.below((1u << 20) + 1));  // dyadic, up to ~1e6
    const Real shift = rng.uniform01() < 0.5 ? shift_magnitude : -shift_magnitude;
    const Vector base = acloo_advantages(q);
    const Vector shifted = acloo_advantages(q.array() + shift);
    if (((base - shifted).array().abs() > 1e-12).any()) {
      report.shift_invariance_pass = false;
    }
  }
  return report;
}

std::string lab_rows_to_csv(const std::vector<LabRow>& rows) {
  std::ostringstream out;
  out << "estimator,oracle_id,k,samples,bias_norm,mean_variance,pass\n";
  char buffer[64];
  for (const LabRow& row : rows) {
    out << estimator_name(row.estimator) << ',' << row.oracle_id << ',' << row.k
        << ',' << row.samples << ',';
    std::snprintf(buffer, sizeof(buffer), "%.17g", row.bias_norm);
    out << buffer << ',';
    std::snprintf(buffer, sizeof(buffer), "%.17g", row.mean_variance);
    out << buffer << ',' << (row.pass ? "pass" : "fail") << "\n";
  }
  return out.str();
}

}  // namespace ssma
