/*
 * Copyright 2026 The edl-cardinality Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "edl/losses.hpp"

#include <cmath>

#include <fmt/format.h>

#include "edl/errors.hpp"
#include "edl/special_functions.hpp"

namespace edl {

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double ex = std::exp(x);
  return ex / (1.0 + ex);
}

std::vector<double> softplus_evidence(std::span<const double> logits) {
  std::vector<double> evidence(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!std::isfinite(logits[i])) {
      throw ValidationError(
          fmt::format("logit at index {} is not finite", i));
    }
    evidence[i] = softplus(logits[i]);
  }
  return evidence;
}

std::size_t one_hot_index(std::span<const double> y, std::size_t k) {
  if (y.size() != k) {
    throw ValidationError(
        fmt::format("target has length {}, expected {}", y.size(), k));
  }
  std::size_t hot = k;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1.0) {
      if (hot != k) throw ValidationError("target is not one-hot");
      hot = i;
    } else if (y[i] != 0.0) {
      throw ValidationError("target is not one-hot");
    }
  }
  if (hot == k) throw ValidationError("target is not one-hot");
  return hot;
}

double edl_mse_loss(const DirichletState& state, std::span<const double> y,
                    VarianceForm form) {
  one_hot_index(y, state.k);
  const double s = state.strength;
  double squared_error = 0.0;
  double variance = 0.0;
  for (std::size_t i = 0; i < state.k; ++i) {
    const double a = state.alpha[i];
    const double residual = y[i] - a / s;
    squared_error += residual * residual;
    const double denominator =
        form == VarianceForm::kExpectation ? s * s * (s + 1.0)
                                           : s * s * (a + 1.0);
    variance += a * (s - a) / denominator;
  }
  return squared_error + variance;
}

std::vector<double> edl_mse_gradient(const DirichletState& state,
                                     std::span<const double> y,
                                     VarianceForm form) {
  one_hot_index(y, state.k);
  const double s = state.strength;
  double residual_dot_p = 0.0;
  double sum_sq = 0.0;
  double printed_shared = 0.0;
  for (std::size_t i = 0; i < state.k; ++i) {
    const double a = state.alpha[i];
    const double p = a / s;
    residual_dot_p += (y[i] - p) * p;
    sum_sq += a * a;
    printed_shared += a / (a + 1.0) * (2.0 * a - s);
  }
  printed_shared /= s * s * s;

  std::vector<double> grad(state.k);
  for (std::size_t j = 0; j < state.k; ++j) {
    const double a = state.alpha[j];
    const double squared_error_term =
        2.0 * (residual_dot_p - (y[j] - a / s)) / s;
    double variance_term = 0.0;
    if (form == VarianceForm::kExpectation) {
      variance_term = -1.0 / ((s + 1.0) * (s + 1.0)) -
                      2.0 * a / (s * s * (s + 1.0)) +
                      sum_sq * (3.0 * s + 2.0) /
                          (s * s * s * (s + 1.0) * (s + 1.0));
    } else {
      variance_term = printed_shared + (s - a * a - 2.0 * a) /
                                           (s * s * (a + 1.0) * (a + 1.0));
    }
    grad[j] = squared_error_term + variance_term;
  }
  return grad;
}

DirichletState adjusted_alpha(const DirichletState& state,
                              std::span<const double> y) {
  const std::size_t hot = one_hot_index(y, state.k);
  std::vector<double> alpha = state.alpha;
  alpha[hot] = 1.0;
  return DirichletState::from_alpha(std::move(alpha));
}

double kl_to_uniform(const DirichletState& alpha_tilde) {
  for (std::size_t i = 0; i < alpha_tilde.k; ++i) {
    if (!(alpha_tilde.alpha[i] >= 1.0)) {
      throw ValidationError(
          fmt::format("alpha~ below 1 at index {}", i));
    }
  }
  const double s = alpha_tilde.strength;
  const double psi_s = digamma(s);
  double kl = log_gamma(s) - log_gamma(static_cast<double>(alpha_tilde.k));
  for (double a : alpha_tilde.alpha) {
    kl -= log_gamma(a);
    kl += (a - 1.0) * (digamma(a) - psi_s);
  }
  // Rounding can leave a tiny negative value at alpha~ = 1.
  return std::max(kl, 0.0);
}

std::vector<double> kl_to_uniform_gradient(const DirichletState& alpha_tilde) {
  const double shared = (alpha_tilde.strength -
                         static_cast<double>(alpha_tilde.k)) *
                        trigamma(alpha_tilde.strength);
  std::vector<double> grad(alpha_tilde.k);
  for (std::size_t j = 0; j < alpha_tilde.k; ++j) {
    const double a = alpha_tilde.alpha[j];
    grad[j] = (a - 1.0) * trigamma(a) - shared;
  }
  return grad;
}

double ib_info_loss(std::span<const double> mu, std::span<const double> sigma) {
  double total = 0.0;
  for (double m : mu) total += m * m;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0.0)) {
      throw ValidationError(
          fmt::format("sigma must be > 0, got {} at index {}", sigma[i], i));
    }
    total += sigma[i] * sigma[i] - 2.0 * std::log(sigma[i]);
  }
  return 0.5 * total;
}

}  // namespace edl
