// Copyright 2026 The jrsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>

#include "jrsp/protocol.hpp"
#include "jrsp/tensor.hpp"
#include "oracles.hpp"

namespace testing_support {

inline oracle::Mat to_oracle(const jrsp::Matrix& m) {
  oracle::Mat out(static_cast<int>(m.rows()));
  for (int i = 0; i < out.dim; ++i)
    for (int j = 0; j < out.dim; ++j) out(i, j) = m(i, j);
  return out;
}

inline oracle::Vec to_oracle(const jrsp::Vector& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

inline jrsp::Matrix to_eigen(const oracle::Mat& m) {
  jrsp::Matrix out(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) out(i, j) = m(i, j);
  return out;
}

inline double max_diff(const oracle::Mat& x, const oracle::Mat& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
  return d;
}

inline double max_diff(const oracle::Vec& x, const oracle::Vec& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

inline jrsp::Matrix random_matrix(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  jrsp::Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = jrsp::Complex(g(rng), g(rng));
  return m;
}

inline jrsp::Vector random_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  jrsp::Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = jrsp::Complex(g(rng), g(rng));
  return v;
}

// Random mixed state of the given size (rank <= 3).
inline jrsp::DensityMatrix random_density(std::mt19937_64& rng, int qubits) {
  const int dim = 1 << qubits;
  jrsp::Matrix m = jrsp::Matrix::Zero(dim, dim);
  for (int i = 0; i < 3; ++i) {
    const jrsp::Vector v = random_vector(rng, dim);
    m += v * v.adjoint();
  }
  m /= m.trace();
  m = 0.5 * (m + m.adjoint()).eval();
  return jrsp::DensityMatrix(qubits, m);
}

inline jrsp::Matrix random_unitary(std::mt19937_64& rng, int dim) {
  Eigen::HouseholderQR<jrsp::Matrix> qr(random_matrix(rng, dim));
  return qr.householderQ() * jrsp::Matrix::Identity(dim, dim);
}

inline std::array<double, 8> random_phases(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
  std::array<double, 8> p{};
  for (double& x : p) x = u(rng);
  return p;
}

}  // namespace testing_support
