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

#pragma once

// Evidential training objectives and their analytic gradients.
//
//   L_EDL = L_MSE(alpha, y) + lambda * KL(Dir(alpha~) || Dir(1))
//   L_IB  = L_MSE(alpha(z), y) + beta * 1/2 (|mu|^2 + |sigma|^2 - 2 sum log sigma)
//
// where alpha~ keeps only the misleading evidence (true-class alpha set to 1).

#include <cstddef>
#include <span>
#include <vector>

#include "edl/dirichlet.hpp"

namespace edl {

// Which variance denominator L_MSE uses.
//   kExpectation: alpha_i (S - alpha_i) / (S^2 (S + 1)), which makes L_MSE
//                 equal E_{p ~ Dir(alpha)} sum_i (y_i - p_i)^2.
//   kPrinted:     alpha_i (S - alpha_i) / (S^2 (alpha_i + 1)); kept for
//                 comparison only.
enum class VarianceForm { kExpectation, kPrinted };

double softplus(double x);
double sigmoid(double x);

// log(1 + exp(logit)) per component, overflow-safe. NaN or infinite logits
// throw ValidationError.
std::vector<double> softplus_evidence(std::span<const double> logits);

// Index of the hot entry; throws ValidationError unless `y` is one-hot with
// length `k`.
std::size_t one_hot_index(std::span<const double> y, std::size_t k);

double edl_mse_loss(const DirichletState& state, std::span<const double> y,
                    VarianceForm form = VarianceForm::kExpectation);

// d L_MSE / d alpha_j.
std::vector<double> edl_mse_gradient(
    const DirichletState& state, std::span<const double> y,
    VarianceForm form = VarianceForm::kExpectation);

// alpha~ = y + (1 - y) * alpha.
DirichletState adjusted_alpha(const DirichletState& state,
                              std::span<const double> y);

// KL(Dir(alpha~) || Dir(1, ..., 1)) in closed form. Requires alpha~_i >= 1.
double kl_to_uniform(const DirichletState& alpha_tilde);

// d KL / d alpha~_j = (alpha~_j - 1) psi'(alpha~_j) - (S~ - K) psi'(S~).
std::vector<double> kl_to_uniform_gradient(const DirichletState& alpha_tilde);

// 1/2 (sum mu^2 + sum sigma^2 - 2 sum log sigma), the proportional form. It
// differs from the exact Gaussian KL to N(0, I) by the constant -C/2.
double ib_info_loss(std::span<const double> mu, std::span<const double> sigma);

}  // namespace edl
