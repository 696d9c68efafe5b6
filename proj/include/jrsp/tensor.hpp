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

// Dense complex linear algebra over ordered multi-qubit registers.
//
// Index convention: basis states are big-endian bit strings. Qubit label 1 is
// the most significant bit, so the ket |q1 q2 ... qn> reads off positionally
// and PureState::amplitude("000111000") addresses exactly that ket.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace jrsp {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kDefaultRegisterCap = 12;
inline constexpr double kExactTol = 1e-12;
inline constexpr double kPsdFloor = -1e-10;

// Ordered list of distinct 1-based qubit labels.
class QubitSelection {
 public:
  QubitSelection(std::initializer_list<int> labels);
  explicit QubitSelection(std::vector<int> labels);

  const std::vector<int>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  bool contains(int label) const;

  // Throws IndexError if any label exceeds register_size.
  void check_within(int register_size) const;

  // Labels of register_size not in this selection, ascending.
  QubitSelection complement(int register_size) const;

  bool operator==(const QubitSelection&) const = default;

 private:
  std::vector<int> labels_;
};

class PureState {
 public:
  PureState(int num_qubits, Vector amplitudes);

  static PureState basis(int num_qubits, std::uint64_t index);
  // "0110" -> |0110>.
  static PureState from_bits(std::string_view bits);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::uint64_t index) const;
  Complex amplitude(std::string_view bits) const;

  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tol = kExactTol) const;
  // Throws ArgumentError on the zero vector.
  PureState normalized() const;

 private:
  int num_qubits_;
  Vector amplitudes_;
};

// 2^out x 2^in complex matrix. When flagged unitary the constructor checks
// O^dagger O = I within kExactTol and throws InvariantError otherwise.
class LinearOperator {
 public:
  LinearOperator(int in_qubits, int out_qubits, Matrix entries, bool unitary = false);
  // Square operator; qubit count inferred from the row count.
  explicit LinearOperator(Matrix entries, bool unitary = false);

  static LinearOperator identity(int num_qubits);

  int in_qubits() const { return in_qubits_; }
  int out_qubits() const { return out_qubits_; }
  const Matrix& matrix() const { return entries_; }
  bool unitary() const { return unitary_; }
  bool is_square() const { return in_qubits_ == out_qubits_; }

  LinearOperator adjoint() const;
  PureState apply(const PureState& psi) const;
  // Composition: (*this) after rhs.
  LinearOperator operator*(const LinearOperator& rhs) const;

 private:
  int in_qubits_;
  int out_qubits_;
  Matrix entries_;
  bool unitary_;
};

class DensityMatrix {
 public:
  // Validates shape, finiteness and Hermiticity (kExactTol). PSD is not
  // checked here; call min_eigenvalue() when it matters.
  DensityMatrix(int num_qubits, Matrix entries);

  static DensityMatrix from_pure(const PureState& psi);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Complex element(std::uint64_t row, std::uint64_t col) const { return entries_(row, col); }

  double trace() const { return entries_.trace().real(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  bool is_psd(double floor = kPsdFloor) const { return min_eigenvalue() >= floor; }

 private:
  int num_qubits_;
  Matrix entries_;
};

namespace gates {
LinearOperator identity();
LinearOperator pauli_x();
LinearOperator pauli_y();
LinearOperator pauli_z();
}  // namespace gates

// Left-operand-major Kronecker product.
PureState tensor_product(const PureState& a, const PureState& b, int register_cap = kDefaultRegisterCap);
LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b,
                              int register_cap = kDefaultRegisterCap);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                             int register_cap = kDefaultRegisterCap);

// Dense full-register form of `op` acting on `targets` (in the listed order),
// identity elsewhere.
LinearOperator embed_operator(const LinearOperator& op, const QubitSelection& targets, int register_size);

// Reduced state on `keep`; result qubit order follows the order of `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, const QubitSelection& keep);

enum class KrausCheck { kTracePreserving, kNone };

// sum_k K rho K^dagger over full-register terms.
DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const LinearOperator> terms,
                          KrausCheck check = KrausCheck::kTracePreserving);

// One factor of a Kraus term given in product form.
struct LocalFactor {
  LinearOperator op;
  QubitSelection targets;
};
using KrausProduct = std::vector<LocalFactor>;

// Same map as apply_kraus, but each term is a product of local operators on
// disjoint targets. Never materialises the full-register matrices.
DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const KrausProduct> terms,
                          KrausCheck check = KrausCheck::kTracePreserving);

// op rho op^dagger with op acting on targets.
DensityMatrix conjugate(const DensityMatrix& rho, const LinearOperator& op, const QubitSelection& targets);

// (<v| (x) I) rho (|v> (x) I): contracts the pure state v onto `targets` and
// returns the unnormalised operator on the remaining qubits (ascending labels).
DensityMatrix project_out(const DensityMatrix& rho, const PureState& v, const QubitSelection& targets);

// Pure-state analogue: (<bra| (x) I)|psi>, unnormalised, remaining qubits in
// ascending label order.
PureState project_out(const PureState& psi, const PureState& bra, const QubitSelection& targets);

// `psi` is stored with its i-th qubit belonging to register label
// `placement.labels()[i]`; returns the same state in natural label order.
PureState place_qubits(const PureState& psi, const QubitSelection& placement);

// Re <psi|rho|psi>; the imaginary part must vanish to kExactTol.
double fidelity_pure_vs_mixed(const PureState& psi, const DensityMatrix& rho);

// max |sum_k K^dagger K - I| entrywise.
double completeness_residual(std::span<const LinearOperator> terms);

}  // namespace jrsp
