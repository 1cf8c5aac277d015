#include "freightneg/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace freightneg {

NegotiationSummary summarize(const Transcript& transcript) {
  NegotiationSummary s;
  s.agreed = transcript.outcome.status == Status::Agreed;
  if (s.agreed) s.savings = broker_savings(transcript);
  s.rounds = transcript.outcome.rounds_used;
  s.retractions = transcript.outcome.retraction_count;
  s.holds = transcript.outcome.hold_count;
  return s;
}

double broker_savings(Rate agreed, const Load& load) {
  return (load.r_max.value() - agreed.value()) / load.band();
}

double broker_savings(const Transcript& transcript) {
  if (transcript.outcome.status != Status::Agreed ||
      !transcript.outcome.agreed_rate) {
    throw std::invalid_argument("savings are undefined without agreement");
  }
  return broker_savings(*transcript.outcome.agreed_rate, transcript.load);
}

double mean(std::span<const double> sample) {
  if (sample.empty()) return 0.0;
  return std::accumulate(sample.begin(), sample.end(), 0.0) / sample.size();
}

double sample_variance(std::span<const double> sample) {
  if (sample.size() < 2) return 0.0;
  const double m = mean(sample);
  double ss = 0.0;
  for (double x : sample) ss += (x - m) * (x - m);
  return ss / (sample.size() - 1);
}

double wald_ci(double p, std::size_t n, double z) {
  if (n == 0) throw std::invalid_argument("wald_ci needs n > 0");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("proportion outside [0,1]");
  return z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double mean_ci(std::span<const double> sample, double z) {
  if (sample.size() < 2) return 0.0;
  return z * std::sqrt(sample_variance(sample) / sample.size());
}

CellMetrics compute_metrics(std::span<const NegotiationSummary> summaries) {
  CellMetrics m;
  m.n = summaries.size();
  if (m.n == 0) return m;

  std::vector<double> savings;
  std::vector<double> rounds;
  std::vector<double> retractions;
  std::size_t agreed = 0;
  std::size_t affected = 0;
  std::size_t affected_agreed = 0;
  double holds = 0.0;
  for (const auto& s : summaries) {
    retractions.push_back(s.retractions);
    if (s.agreed) {
      ++agreed;
      savings.push_back(s.savings);
      rounds.push_back(s.rounds);
    }
    if (s.holds > 0) {
      ++affected;
      holds += s.holds;
      if (s.agreed) ++affected_agreed;
    }
  }
  const double rate = static_cast<double>(agreed) / m.n;
  m.agreement_rate = {rate, wald_ci(rate, m.n), m.n};
  m.mean_savings = {mean(savings), mean_ci(savings), savings.size()};
  m.mean_rounds = {mean(rounds), mean_ci(rounds), rounds.size()};
  m.retraction_rate = {mean(retractions), mean_ci(retractions), m.n};
  m.holds.affected = affected;
  m.holds.share = static_cast<double>(affected) / m.n;
  if (affected > 0) {
    m.holds.mean_per_affected = holds / affected;
    m.holds.affected_agreement_rate =
        static_cast<double>(affected_agreed) / affected;
  }
  return m;
}

StatTest welch_t(double mean_a, double var_a, std::size_t n_a, double mean_b,
                 double var_b, std::size_t n_b) {
  if (n_a < 2 || n_b < 2) {
    throw std::invalid_argument("welch_t needs at least two observations each");
  }
  const double ua = var_a / n_a;
  const double ub = var_b / n_b;
  const double se2 = ua + ub;
  if (!(se2 > 0.0)) throw std::invalid_argument("welch_t: zero variance");
  StatTest test;
  test.kind = StatTest::Kind::WelchT;
  test.statistic = (mean_a - mean_b) / std::sqrt(se2);
  test.df = se2 * se2 /
            (ua * ua / static_cast<double>(n_a - 1) +
             ub * ub / static_cast<double>(n_b - 1));
  const boost::math::students_t dist(test.df);
  test.p_value = 2.0 * boost::math::cdf(boost::math::complement(
                           dist, std::fabs(test.statistic)));
  test.p_value = std::min(1.0, test.p_value);
  return test;
}

StatTest welch_t(std::span<const double> a, std::span<const double> b) {
  return welch_t(mean(a), sample_variance(a), a.size(), mean(b),
                 sample_variance(b), b.size());
}

StatTest two_prop_z(std::size_t k1, std::size_t n1, std::size_t k2,
                    std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("two_prop_z needs n > 0");
  if (k1 > n1 || k2 > n2) throw std::invalid_argument("successes exceed trials");
  StatTest test;
  test.kind = StatTest::Kind::TwoProportionZ;
  const double p1 = static_cast<double>(k1) / n1;
  const double p2 = static_cast<double>(k2) / n2;
  const double pooled = static_cast<double>(k1 + k2) / (n1 + n2);
  const double se =
      std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
  if (!(se > 0.0)) return test;  // both proportions 0 or both 1
  test.statistic = (p1 - p2) / se;
  const boost::math::normal dist;
  test.p_value = std::min(
      1.0, 2.0 * boost::math::cdf(boost::math::complement(
                     dist, std::fabs(test.statistic))));
  return test;
}

}  // namespace freightneg
