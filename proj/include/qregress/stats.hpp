#pragma once

#include <cstddef>
#include <span>

#include "qregress/error.hpp"

namespace qregress::stats {

struct TTestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

enum class TTestKind {
  Welch,    // unequal variances, Welch-Satterthwaite df
  Student,  // pooled variance, df = n_a + n_b - 2
};

/// Two-tailed two-sample t-test of mean(a) - mean(b).
///
/// Both samples constant with equal means gives statistic 0, p 1. Both
/// constant with different means throws DegenerateStateError; fewer than two
/// elements in either sample throws SizeError.
TTestReport t_test_two_tailed(std::span<const double> a, std::span<const double> b,
                              TTestKind kind = TTestKind::Welch);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double t_two_tailed_p(double t, double df);

struct Metrics {
  double mse = 0.0;
  double mae = 0.0;
  std::size_t n = 0;
};

/// Throws DimensionError on empty or unequal input.
Metrics metrics(std::span<const double> predicted, std::span<const double> actual);

}  // namespace qregress::stats
