#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "freightneg/domain.hpp"
#include "freightneg/protocol.hpp"

namespace freightneg {

inline constexpr double kZ975 = 1.96;

// The per-negotiation facts every metric is built from.
struct NegotiationSummary {
  bool agreed = false;
  double savings = 0.0;  // meaningful only when agreed
  int rounds = 0;        // round of agreement when agreed
  int retractions = 0;
  int holds = 0;
};

NegotiationSummary summarize(const Transcript& transcript);

// (r_max - agreed) / (r_max - r_min); 1.0 is best for the broker.
double broker_savings(Rate agreed, const Load& load);
// Throws std::invalid_argument for a negotiation that did not agree.
double broker_savings(const Transcript& transcript);

struct Estimate {
  double value = 0.0;
  double ci_half_width = 0.0;
  std::size_t n = 0;
};

struct HoldStats {
  double share = 0.0;              // negotiations with >= 1 hold
  double mean_per_affected = 0.0;  // holds per affected negotiation
  std::size_t affected = 0;
  double affected_agreement_rate = 0.0;
};

struct CellMetrics {
  std::size_t n = 0;
  Estimate agreement_rate;
  Estimate mean_savings;  // agreed negotiations only
  Estimate mean_rounds;   // agreed negotiations only
  Estimate retraction_rate;
  HoldStats holds;
};

CellMetrics compute_metrics(std::span<const NegotiationSummary> summaries);

// z * sqrt(p (1 - p) / n).
double wald_ci(double p, std::size_t n, double z = kZ975);
// Normal approximation with the sample standard deviation.
double mean_ci(std::span<const double> sample, double z = kZ975);

double mean(std::span<const double> sample);
// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> sample);

struct StatTest {
  enum class Kind { WelchT, TwoProportionZ };
  Kind kind = Kind::WelchT;
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;  // Welch only
};

// Two-sided Welch t-test with Welch-Satterthwaite degrees of freedom.
StatTest welch_t(std::span<const double> a, std::span<const double> b);
StatTest welch_t(double mean_a, double var_a, std::size_t n_a, double mean_b,
                 double var_b, std::size_t n_b);

// Pooled two-proportion z-test, two-sided.
StatTest two_prop_z(std::size_t k1, std::size_t n1, std::size_t k2,
                    std::size_t n2);

}  // namespace freightneg
