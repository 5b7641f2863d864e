// Copyright 2026 The qmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmc/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "qmc/error.hpp"
#include "qmc/random.hpp"

namespace qmc {
namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

void check_binary(std::span<const int> v, const char* what) {
  for (int x : v) {
    if (x != 0 && x != 1) {
      throw Error(ErrorKind::InvalidInput, std::string(what) + " must be 0/1");
    }
  }
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_var(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

double percentile(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error(ErrorKind::Numerical, "incomplete beta continued fraction did not converge");
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw Error(ErrorKind::Shape, "predictions and labels differ in length");
  }
  check_binary(preds, "predictions");
  check_binary(labels, "labels");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] == 1) (preds[i] == 1 ? cm.tp : cm.fn)++;
    else (preds[i] == 1 ? cm.fp : cm.tn)++;
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorKind::DegenerateInput, "empty confusion matrix");
  MetricsReport m;
  m.confusion = cm;
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  m.fpr = ratio(cm.fp, cm.fp + cm.tn);
  m.fnr = ratio(cm.fn, cm.fn + cm.tp);
  if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed,
                                           std::size_t iteration) {
  Rng rng(mix_seed(seed, iteration));
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = uniform_index(rng, n);
  return idx;
}

StatReport bootstrap_ci(std::span<const int> correct, std::size_t iterations,
                        std::uint64_t seed) {
  if (correct.empty()) throw Error(ErrorKind::DegenerateInput, "bootstrap of an empty sample");
  if (iterations < 100) throw Error(ErrorKind::InvalidInput, "bootstrap needs >= 100 iterations");
  check_binary(correct, "correctness values");

  const std::size_t n = correct.size();
  StatReport r;
  r.mean = static_cast<double>(std::accumulate(correct.begin(), correct.end(), std::size_t{0})) /
           static_cast<double>(n);
  r.distribution.assign(iterations, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t it = 0; it < static_cast<std::int64_t>(iterations); ++it) {
    std::size_t hits = 0;
    for (std::size_t i : bootstrap_indices(n, seed, static_cast<std::size_t>(it))) {
      hits += static_cast<std::size_t>(correct[i]);
    }
    r.distribution[static_cast<std::size_t>(it)] =
        static_cast<double>(hits) / static_cast<double>(n);
  }
  std::vector<double> sorted = r.distribution;
  std::sort(sorted.begin(), sorted.end());
  r.ci_low = percentile(sorted, 0.025);
  r.ci_high = percentile(sorted, 0.975);
  const double bmean = mean_of(r.distribution);
  if (bmean > 0.0) r.coeff_variation = std::sqrt(sample_var(r.distribution, bmean)) / bmean;
  return r;
}

std::pair<std::vector<double>, std::vector<double>> paired_bootstrap(
    std::span<const int> correct_a, std::span<const int> correct_b, std::size_t iterations,
    std::uint64_t seed) {
  if (correct_a.size() != correct_b.size()) {
    throw Error(ErrorKind::Shape, "paired bootstrap inputs differ in length");
  }
  if (correct_a.empty()) throw Error(ErrorKind::DegenerateInput, "bootstrap of an empty sample");
  const std::size_t n = correct_a.size();
  std::vector<double> a(iterations), b(iterations);
#pragma omp parallel for schedule(static)
  for (std::int64_t it = 0; it < static_cast<std::int64_t>(iterations); ++it) {
    std::size_t ha = 0, hb = 0;
    for (std::size_t i : bootstrap_indices(n, seed, static_cast<std::size_t>(it))) {
      ha += static_cast<std::size_t>(correct_a[i]);
      hb += static_cast<std::size_t>(correct_b[i]);
    }
    a[static_cast<std::size_t>(it)] = static_cast<double>(ha) / static_cast<double>(n);
    b[static_cast<std::size_t>(it)] = static_cast<double>(hb) / static_cast<double>(n);
  }
  return {std::move(a), std::move(b)};
}

std::optional<double> cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "Cohen's d needs at least 2 values per group");
  }
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double pooled =
      std::sqrt(((na - 1.0) * sample_var(a, ma) + (nb - 1.0) * sample_var(b, mb)) /
                (na + nb - 2.0));
  if (pooled == 0.0) return std::nullopt;
  return (ma - mb) / pooled;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::Shape, "paired samples differ in length");
  if (a.size() < 2) throw Error(ErrorKind::InvalidInput, "paired t-test needs n >= 2");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double md = mean_of(diff);
  const double sd = std::sqrt(sample_var(diff, md));
  if (sd == 0.0) {
    if (md == 0.0) return {0.0, 1.0};
    return {md > 0.0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity(),
            0.0};
  }
  const double n = static_cast<double>(diff.size());
  const double t = md / (sd / std::sqrt(n));
  const double dof = n - 1.0;
  const double p = regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
  return {t, std::clamp(p, 0.0, 1.0)};
}

std::optional<double> cohens_kappa(std::span<const int> p1, std::span<const int> p2) {
  if (p1.size() != p2.size()) throw Error(ErrorKind::Shape, "rater sequences differ in length");
  if (p1.empty()) throw Error(ErrorKind::DegenerateInput, "kappa of empty sequences");
  check_binary(p1, "ratings");
  check_binary(p2, "ratings");
  const double n = static_cast<double>(p1.size());
  std::size_t agree = 0, ones1 = 0, ones2 = 0;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    agree += p1[i] == p2[i];
    ones1 += static_cast<std::size_t>(p1[i]);
    ones2 += static_cast<std::size_t>(p2[i]);
  }
  const double po = static_cast<double>(agree) / n;
  const double a1 = static_cast<double>(ones1) / n;
  const double b1 = static_cast<double>(ones2) / n;
  const double pe = a1 * b1 + (1.0 - a1) * (1.0 - b1);
  if (pe >= 1.0) return std::nullopt;
  return (po - pe) / (1.0 - pe);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorKind::InvalidInput, "beta parameters must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

void print_metrics_table(std::ostream& os, const MetricsReport& m, const StatReport* boot) {
  auto row = [&](const char* name, std::optional<double> v) {
    os << "  " << std::left << std::setw(12) << name << std::right << std::setw(10);
    if (v) os << std::fixed << std::setprecision(4) << *v;
    else os << "undefined";
    os << '\n';
  };
  const auto& cm = m.confusion;
  os << "  confusion   tp=" << cm.tp << " fp=" << cm.fp << " tn=" << cm.tn << " fn=" << cm.fn
     << '\n';
  row("accuracy", m.accuracy);
  row("precision", m.precision);
  row("recall", m.recall);
  row("f1", m.f1);
  row("fpr", m.fpr);
  row("fnr", m.fnr);
  if (boot) {
    row("ci95_low", boot->ci_low);
    row("ci95_high", boot->ci_high);
    row("boot_cv", boot->coeff_variation);
  }
  os.unsetf(std::ios::floatfield);
}

}  // namespace qmc
