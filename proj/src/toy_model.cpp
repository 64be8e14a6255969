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

#include "edl/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "edl/errors.hpp"
#include "edl/metrics.hpp"
#include "edl/random.hpp"

namespace edl {
namespace {

constexpr std::uint64_t kNoiseStream = 4;
constexpr std::uint64_t kInitStream = 5;
constexpr double kInitScale = 0.01;
constexpr std::size_t kFarProbeCount = 32;
constexpr double kFarProbeFactor = 11.0;

// Forward pass of one example, keeping what the backward pass needs.
struct Forward {
  std::vector<double> mu;     // evidence-head output (logits / latent mean)
  std::vector<double> pre_sigma;
  std::vector<double> sigma;
  std::vector<double> eps;
  std::vector<double> z;      // pre-softplus input
  DirichletState state;
  std::vector<double> target;
};

Forward forward(const ToyModelParams& params, const Example& example,
                double noise_scale, Rng* noise) {
  const std::size_t k = params.num_classes();
  Forward f;
  f.mu.resize(k);
  params.evidence_head.apply(example.features, f.mu);
  f.z = f.mu;
  if (params.mode == LossMode::kIbEdl) {
    f.pre_sigma.resize(k);
    params.sigma_head->apply(example.features, f.pre_sigma);
    f.sigma.resize(k);
    f.eps.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      f.sigma[i] = softplus(f.pre_sigma[i]);
      f.eps[i] = noise != nullptr ? noise->normal() : 0.0;
      f.z[i] += noise_scale * f.sigma[i] * f.eps[i];
    }
  }
  f.state = evidence_to_alpha(softplus_evidence(f.z));
  f.target.assign(k, 0.0);
  f.target[example.label] = 1.0;
  return f;
}

void check_batch(const ToyModelParams& params, std::span<const Example> batch) {
  params.validate();
  if (batch.empty()) throw ValidationError("empty batch");
  for (std::size_t n = 0; n < batch.size(); ++n) {
    if (batch[n].features.size() != params.feature_dim()) {
      throw ValidationError(fmt::format(
          "example {} has {} features, model expects {}", n,
          batch[n].features.size(), params.feature_dim()));
    }
    if (batch[n].label >= params.num_classes()) {
      throw ValidationError(fmt::format("example {} label {} out of range", n,
                                        batch[n].label));
    }
  }
}

void accumulate(LinearHead& grad, std::span<const double> output_grad,
                std::span<const double> x, double weight) {
  for (std::size_t o = 0; o < grad.outputs; ++o) {
    const double g = output_grad[o] * weight;
    grad.bias[o] += g;
    double* row = grad.weights.data() + o * grad.inputs;
    for (std::size_t i = 0; i < grad.inputs; ++i) row[i] += g * x[i];
  }
}

}  // namespace

const char* loss_mode_name(LossMode mode) {
  return mode == LossMode::kEdl ? "edl" : "ib-edl";
}

LinearHead LinearHead::zeros(std::size_t outputs, std::size_t inputs) {
  LinearHead head;
  head.outputs = outputs;
  head.inputs = inputs;
  head.weights.assign(outputs * inputs, 0.0);
  head.bias.assign(outputs, 0.0);
  return head;
}

void LinearHead::apply(std::span<const double> x, std::span<double> out) const {
  for (std::size_t o = 0; o < outputs; ++o) {
    const double* row = weights.data() + o * inputs;
    double acc = bias[o];
    for (std::size_t i = 0; i < inputs; ++i) acc += row[i] * x[i];
    out[o] = acc;
  }
}

ToyModelParams ToyModelParams::zeros(LossMode mode, std::size_t num_classes,
                                     std::size_t feature_dim) {
  ToyModelParams params;
  params.mode = mode;
  params.evidence_head = LinearHead::zeros(num_classes, feature_dim);
  if (mode == LossMode::kIbEdl) {
    params.sigma_head = LinearHead::zeros(num_classes, feature_dim);
  }
  return params;
}

std::size_t ToyModelParams::parameter_count() const {
  std::size_t count = evidence_head.weights.size() + evidence_head.bias.size();
  if (sigma_head) count += sigma_head->weights.size() + sigma_head->bias.size();
  return count;
}

void ToyModelParams::validate() const {
  auto check_head = [](const LinearHead& head, const char* name) {
    if (head.weights.size() != head.outputs * head.inputs ||
        head.bias.size() != head.outputs) {
      throw ValidationError(fmt::format("{} has inconsistent dimensions", name));
    }
  };
  check_head(evidence_head, "evidence head");
  if (evidence_head.outputs < 2) {
    throw ValidationError("toy model needs at least 2 classes");
  }
  if ((mode == LossMode::kIbEdl) != sigma_head.has_value()) {
    throw ValidationError("sigma head must be present iff mode is IB-EDL");
  }
  if (sigma_head) {
    check_head(*sigma_head, "sigma head");
    if (sigma_head->outputs != evidence_head.outputs ||
        sigma_head->inputs != evidence_head.inputs) {
      throw ValidationError("sigma head shape differs from evidence head");
    }
  }
  if (!(sigma_mult >= 0.0)) throw ValidationError("sigma_mult must be >= 0");
}

std::vector<double> ToyModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  auto append = [&flat](const LinearHead& head) {
    flat.insert(flat.end(), head.weights.begin(), head.weights.end());
    flat.insert(flat.end(), head.bias.begin(), head.bias.end());
  };
  append(evidence_head);
  if (sigma_head) append(*sigma_head);
  return flat;
}

void ToyModelParams::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw ValidationError("flat parameter vector has the wrong length");
  }
  auto it = flat.begin();
  auto take = [&it](LinearHead& head) {
    std::copy_n(it, head.weights.size(), head.weights.begin());
    it += static_cast<std::ptrdiff_t>(head.weights.size());
    std::copy_n(it, head.bias.size(), head.bias.begin());
    it += static_cast<std::ptrdiff_t>(head.bias.size());
  };
  take(evidence_head);
  if (sigma_head) take(*sigma_head);
}

LossBreakdown total_loss(const ToyModelParams& params,
                         std::span<const Example> batch,
                         const LossConfig& config) {
  check_batch(params, batch);
  Rng noise(config.seed, kNoiseStream);
  const bool ib = params.mode == LossMode::kIbEdl;

  LossBreakdown out;
  out.lambda_weight = ib ? 0.0 : config.lambda;
  out.beta_weight = ib ? config.beta : 0.0;
  for (const Example& example : batch) {
    const Forward f = forward(params, example, config.noise_scale, &noise);
    out.mse_term += edl_mse_loss(f.state, f.target, config.variance_form);
    if (ib) {
      out.ib_info_term += ib_info_loss(f.mu, f.sigma);
    } else {
      out.kl_term += kl_to_uniform(adjusted_alpha(f.state, f.target));
    }
  }
  const double n = static_cast<double>(batch.size());
  out.mse_term /= n;
  out.kl_term /= n;
  out.ib_info_term /= n;
  out.total = ib ? out.mse_term + out.beta_weight * out.ib_info_term
                 : out.mse_term + out.lambda_weight * out.kl_term;
  return out;
}

ToyModelParams loss_gradient(const ToyModelParams& params,
                             std::span<const Example> batch,
                             const LossConfig& config) {
  check_batch(params, batch);
  Rng noise(config.seed, kNoiseStream);
  const bool ib = params.mode == LossMode::kIbEdl;
  const std::size_t k = params.num_classes();
  const double weight = 1.0 / static_cast<double>(batch.size());

  ToyModelParams grad =
      ToyModelParams::zeros(params.mode, k, params.feature_dim());
  grad.sigma_mult = params.sigma_mult;
  std::vector<double> grad_mu(k);
  std::vector<double> grad_pre_sigma(k);

  for (const Example& example : batch) {
    const Forward f = forward(params, example, config.noise_scale, &noise);
    std::vector<double> grad_alpha =
        edl_mse_gradient(f.state, f.target, config.variance_form);
    if (!ib) {
      const std::vector<double> grad_kl =
          kl_to_uniform_gradient(adjusted_alpha(f.state, f.target));
      for (std::size_t j = 0; j < k; ++j) {
        if (j != example.label) grad_alpha[j] += config.lambda * grad_kl[j];
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      const double grad_z = grad_alpha[j] * sigmoid(f.z[j]);
      grad_mu[j] = grad_z;
      if (ib) {
        grad_mu[j] += config.beta * f.mu[j];
        const double grad_sigma =
            grad_z * config.noise_scale * f.eps[j] +
            config.beta * (f.sigma[j] - 1.0 / f.sigma[j]);
        grad_pre_sigma[j] = grad_sigma * sigmoid(f.pre_sigma[j]);
      }
    }
    accumulate(grad.evidence_head, grad_mu, example.features, weight);
    if (ib) accumulate(*grad.sigma_head, grad_pre_sigma, example.features, weight);
  }
  return grad;
}

std::vector<double> predict_evidence(const ToyModelParams& params,
                                     std::span<const double> features,
                                     std::uint64_t seed) {
  if (features.size() != params.feature_dim()) {
    throw ValidationError("feature vector has the wrong length");
  }
  Example example{std::vector<double>(features.begin(), features.end()), 0};
  Rng noise(seed, kNoiseStream);
  const Forward f = forward(params, example, params.sigma_mult,
                            params.sigma_mult > 0.0 ? &noise : nullptr);
  std::vector<double> evidence(f.state.k);
  for (std::size_t i = 0; i < f.state.k; ++i) evidence[i] = f.state.alpha[i] - 1.0;
  return evidence;
}

RbfFeatureMap RbfFeatureMap::fit(std::span<const LabeledPoint> points,
                                 std::size_t grid_size) {
  if (points.empty()) throw ValidationError("cannot fit features to no data");
  if (grid_size < 2) throw ValidationError("RBF grid needs >= 2 points per side");
  std::array<double, 2> lo = points.front().x;
  std::array<double, 2> hi = points.front().x;
  for (const LabeledPoint& p : points) {
    for (std::size_t d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], p.x[d]);
      hi[d] = std::max(hi[d], p.x[d]);
    }
  }
  const double cells = static_cast<double>(grid_size - 1);
  std::array<double, 2> step{};
  for (std::size_t d = 0; d < 2; ++d) {
    step[d] = std::max((hi[d] - lo[d]) / cells, 1e-6);
  }
  RbfFeatureMap map;
  map.bandwidth = std::max(step[0], step[1]);
  for (std::size_t i = 0; i < grid_size; ++i) {
    for (std::size_t j = 0; j < grid_size; ++j) {
      map.centres.push_back({lo[0] + step[0] * static_cast<double>(i),
                             lo[1] + step[1] * static_cast<double>(j)});
    }
  }
  return map;
}

std::vector<double> RbfFeatureMap::operator()(
    const std::array<double, 2>& x) const {
  std::vector<double> phi(centres.size());
  const double denom = 2.0 * bandwidth * bandwidth;
  for (std::size_t c = 0; c < centres.size(); ++c) {
    const double dx = x[0] - centres[c][0];
    const double dy = x[1] - centres[c][1];
    phi[c] = std::exp(-(dx * dx + dy * dy) / denom);
  }
  return phi;
}

double LambdaSchedule::at(std::size_t step) const {
  if (ramp_steps == 0) return value;
  const double ramp =
      static_cast<double>(step) / static_cast<double>(ramp_steps);
  return value * std::min(1.0, ramp);
}

ToyModelParams initial_toy_params(const TrainConfig& config,
                                  std::size_t num_classes,
                                  std::size_t feature_dim) {
  ToyModelParams params =
      ToyModelParams::zeros(config.mode, num_classes, feature_dim);
  params.sigma_mult = config.sigma_mult;
  Rng init(config.seed, kInitStream);
  for (double& w : params.evidence_head.weights) w = kInitScale * init.normal();
  if (params.sigma_head) {
    for (double& w : params.sigma_head->weights) w = kInitScale * init.normal();
  }
  return params;
}

TrainedToyModel train_toy(const TrainConfig& config,
                          std::span<const LabeledPoint> data) {
  if (!(config.learning_rate > 0.0)) {
    throw ValidationError("learning rate must be > 0");
  }
  std::size_t num_classes = 0;
  for (const LabeledPoint& p : data) {
    num_classes = std::max(num_classes, p.label + 1);
  }
  std::vector<std::size_t> per_class(num_classes, 0);
  for (const LabeledPoint& p : data) ++per_class[p.label];
  if (num_classes < 2) throw ValidationError("training data needs >= 2 classes");
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (per_class[c] < 50) {
      throw ValidationError(fmt::format(
          "class {} has {} points, need >= 50", c, per_class[c]));
    }
  }

  TrainedToyModel model;
  model.features = RbfFeatureMap::fit(data, config.rbf_grid);
  std::vector<Example> batch;
  batch.reserve(data.size());
  for (const LabeledPoint& p : data) {
    batch.push_back({model.features(p.x), p.label});
  }
  model.params = initial_toy_params(config, num_classes, model.features.dim());

  LossConfig loss_config;
  loss_config.beta = config.beta;
  std::vector<double> flat = model.params.flatten();
  double last_loss = 0.0;
  for (std::size_t step = 0; step < config.steps; ++step) {
    loss_config.lambda = config.lambda.at(step);
    loss_config.seed = stream_seed(config.seed, step);
    try {
      last_loss = total_loss(model.params, batch, loss_config).total;
    } catch (const ValidationError&) {
      // Overflowing parameters surface as non-finite logits.
      last_loss = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(last_loss)) {
      throw TrainingError(
          fmt::format("loss became non-finite at step {}", step),
          static_cast<long>(step));
    }
    const std::vector<double> grad =
        loss_gradient(model.params, batch, loss_config).flatten();
    for (std::size_t i = 0; i < flat.size(); ++i) {
      flat[i] -= config.learning_rate * grad[i];
    }
    model.params.assign(flat);
  }

  TrainSummary& summary = model.summary;
  summary.steps = config.steps;
  summary.final_loss = last_loss;
  std::size_t hits = 0;
  double id_vacuity = 0.0;
  double data_radius = 0.0;
  for (std::size_t n = 0; n < batch.size(); ++n) {
    const DirichletState state =
        evidence_to_alpha(predict_evidence(model.params, batch[n].features));
    const std::vector<double> probs = expected_probabilities(state);
    hits += argmax(probs) == batch[n].label ? 1 : 0;
    id_vacuity += vacuity(state);
    data_radius = std::max(data_radius, std::hypot(data[n].x[0], data[n].x[1]));
  }
  summary.train_accuracy =
      static_cast<double>(hits) / static_cast<double>(batch.size());
  summary.mean_id_vacuity = id_vacuity / static_cast<double>(batch.size());

  summary.far_probe_radius = kFarProbeFactor * data_radius;
  double far_vacuity = 0.0;
  for (std::size_t i = 0; i < kFarProbeCount; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(kFarProbeCount);
    const std::array<double, 2> probe{summary.far_probe_radius * std::cos(angle),
                                      summary.far_probe_radius * std::sin(angle)};
    far_vacuity += vacuity(evidence_to_alpha(
        predict_evidence(model.params, model.features(probe))));
  }
  summary.mean_far_vacuity = far_vacuity / static_cast<double>(kFarProbeCount);
  return model;
}

}  // namespace edl
