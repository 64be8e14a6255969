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

// A linear evidential classifier used to exercise the losses end to end.
//
// EDL mode:    logits = W phi + b, evidence = softplus(logits).
// IB-EDL mode: mu = W phi + b, sigma = softplus(W_s phi + b_s),
//              z = mu + scale * sigma * eps, evidence = softplus(z).
// During training scale = 1; at inference scale = sigma_mult.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "edl/losses.hpp"
#include "edl/synthetic.hpp"

namespace edl {

enum class LossMode { kEdl, kIbEdl };

const char* loss_mode_name(LossMode mode);

// Row-major (outputs x inputs) weights plus bias.
struct LinearHead {
  std::size_t outputs = 0;
  std::size_t inputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  static LinearHead zeros(std::size_t outputs, std::size_t inputs);
  void apply(std::span<const double> x, std::span<double> out) const;
};

struct ToyModelParams {
  LossMode mode = LossMode::kEdl;
  LinearHead evidence_head;
  std::optional<LinearHead> sigma_head;  // present iff mode == kIbEdl
  double sigma_mult = 0.0;

  static ToyModelParams zeros(LossMode mode, std::size_t num_classes,
                              std::size_t feature_dim);

  std::size_t num_classes() const { return evidence_head.outputs; }
  std::size_t feature_dim() const { return evidence_head.inputs; }
  std::size_t parameter_count() const;
  void validate() const;

  // All weights and biases in a fixed order: evidence weights, evidence bias,
  // then (IB mode) sigma weights, sigma bias.
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
};

struct Example {
  std::vector<double> features;
  std::size_t label = 0;
};

struct LossBreakdown {
  double mse_term = 0.0;
  double kl_term = 0.0;       // EDL mode only
  double ib_info_term = 0.0;  // IB mode only
  double lambda_weight = 0.0;
  double beta_weight = 0.0;
  double total = 0.0;
};

struct LossConfig {
  double lambda = 1.0;  // EDL mode
  double beta = 1e-3;   // IB mode
  std::uint64_t seed = 0;
  // Multiplies the reparameterisation noise (1 for training).
  double noise_scale = 1.0;
  VarianceForm variance_form = VarianceForm::kExpectation;
};

// Batch mean of the per-example loss. IB noise eps ~ N(0, 1) is drawn in
// (example, class) order from stream 4 of `config.seed`.
LossBreakdown total_loss(const ToyModelParams& params,
                         std::span<const Example> batch,
                         const LossConfig& config);

// Gradient of total_loss().total with the same noise; same shape as params.
ToyModelParams loss_gradient(const ToyModelParams& params,
                             std::span<const Example> batch,
                             const LossConfig& config);

// Inference-time evidence, using params.sigma_mult as the noise scale.
std::vector<double> predict_evidence(const ToyModelParams& params,
                                     std::span<const double> features,
                                     std::uint64_t seed = 0);

// Gaussian radial basis features on a square grid spanning the data.
struct RbfFeatureMap {
  std::vector<std::array<double, 2>> centres;
  double bandwidth = 1.0;

  static RbfFeatureMap fit(std::span<const LabeledPoint> points,
                           std::size_t grid_size);
  std::vector<double> operator()(const std::array<double, 2>& x) const;
  std::size_t dim() const { return centres.size(); }
};

// lambda_t = value * min(1, t / ramp_steps); constant when ramp_steps == 0.
struct LambdaSchedule {
  double value = 1.0;
  std::size_t ramp_steps = 0;

  double at(std::size_t step) const;
};

struct TrainConfig {
  LossMode mode = LossMode::kEdl;
  std::size_t steps = 500;
  double learning_rate = 0.5;
  LambdaSchedule lambda;
  double beta = 1e-3;
  std::uint64_t seed = 0;
  double sigma_mult = 0.0;
  std::size_t rbf_grid = 7;
};

struct TrainSummary {
  std::size_t steps = 0;
  double final_loss = 0.0;
  double train_accuracy = 0.0;
  double mean_id_vacuity = 0.0;
  double mean_far_vacuity = 0.0;
  double far_probe_radius = 0.0;
};

struct TrainedToyModel {
  ToyModelParams params;
  RbfFeatureMap features;
  TrainSummary summary;
};

// Full-batch gradient descent with a constant learning rate. Deterministic
// given the seed. Needs >= 2 classes with >= 50 points each. Far probes sit
// on a circle of radius 11x the largest data norm.
TrainedToyModel train_toy(const TrainConfig& config,
                          std::span<const LabeledPoint> data);

// Parameters train_toy() starts from.
ToyModelParams initial_toy_params(const TrainConfig& config,
                                  std::size_t num_classes,
                                  std::size_t feature_dim);

}  // namespace edl
