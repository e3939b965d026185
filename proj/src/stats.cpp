#include "qregress/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qregress::stats {

namespace {

struct Moments {
  double mean;
  double variance;  // unbiased
};

Moments moments(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  double comp = 0.0;
  for (double x : v) {
    ss += (x - mean) * (x - mean);
    comp += x - mean;
  }
  const auto n = static_cast<double>(v.size());
  // Corrected two-pass formula.
  return {mean, (ss - comp * comp / n) / (n - 1.0)};
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw RangeError("incomplete beta argument outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fastest on this side of the mean.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw ParameterError("degrees of freedom must be positive");
  if (std::isnan(t)) throw ParameterError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  const double p = incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

TTestReport t_test_two_tailed(std::span<const double> a, std::span<const double> b, TTestKind kind) {
  if (a.size() < 2 || b.size() < 2) throw SizeError("t-test needs at least two values per sample");
  const auto ma = moments(a);
  const auto mb = moments(b);
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());

  TTestReport r;
  r.n_a = a.size();
  r.n_b = b.size();
  const double diff = ma.mean - mb.mean;

  double se_sq = 0.0;
  if (kind == TTestKind::Welch) {
    const double va = ma.variance / na;
    const double vb = mb.variance / nb;
    se_sq = va + vb;
    r.df = se_sq > 0.0 ? se_sq * se_sq / (va * va / (na - 1.0) + vb * vb / (nb - 1.0)) : na + nb - 2.0;
  } else {
    r.df = na + nb - 2.0;
    const double pooled = ((na - 1.0) * ma.variance + (nb - 1.0) * mb.variance) / r.df;
    se_sq = pooled * (1.0 / na + 1.0 / nb);
  }

  if (!(se_sq > 0.0)) {
    if (diff == 0.0) return r;  // statistic 0, p 1
    throw DegenerateStateError("both samples are constant with different means");
  }
  r.statistic = diff / std::sqrt(se_sq);
  r.p_value = t_two_tailed_p(r.statistic, r.df);
  return r;
}

Metrics metrics(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.empty() || predicted.size() != actual.size()) {
    throw DimensionError("metrics need equal, nonzero lengths");
  }
  Metrics m;
  m.n = predicted.size();
  for (std::size_t i = 0; i < m.n; ++i) {
    const double d = predicted[i] - actual[i];
    m.mse += d * d;
    m.mae += std::abs(d);
  }
  m.mse /= static_cast<double>(m.n);
  m.mae /= static_cast<double>(m.n);
  return m;
}

}  // namespace qregress::stats
