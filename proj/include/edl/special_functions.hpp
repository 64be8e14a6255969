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

// Gamma-family special functions needed by the Dirichlet KL divergence and
// its gradient. Accurate to >= 10 significant digits on [0.5, 1e4]; all
// throw DomainError for x <= 0.

namespace edl {

// ln Gamma(x), Lanczos approximation (g = 7, 9 terms).
double log_gamma(double x);

// psi(x) = d/dx ln Gamma(x): upward recurrence then asymptotic series.
double digamma(double x);

// psi'(x), same scheme as digamma.
double trigamma(double x);

}  // namespace edl
