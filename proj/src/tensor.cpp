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

#include "jrsp/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

#include "jrsp/errors.hpp"

namespace jrsp {
namespace {

int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw ArgumentError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw ArgumentError(std::string(what) + " has non-finite entries");
}

// Maps sub-register indices (first listed label = most significant bit) onto
// full-register bit patterns.
class BitScatter {
 public:
  BitScatter(const std::vector<int>& labels, int register_size) {
    positions_.reserve(labels.size());
    for (int label : labels) {
      const int pos = register_size - label;
      positions_.push_back(pos);
      mask_ |= std::uint64_t{1} << pos;
    }
    const std::uint64_t sub = std::uint64_t{1} << labels.size();
    offsets_.resize(sub);
    for (std::uint64_t s = 0; s < sub; ++s) offsets_[s] = scatter_slow(s);
  }

  std::uint64_t mask() const { return mask_; }
  std::uint64_t scatter(std::uint64_t sub) const { return offsets_[sub]; }
  std::uint64_t gather(std::uint64_t full) const {
    const std::size_t k = positions_.size();
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k; ++i) {
      s |= ((full >> positions_[i]) & 1U) << (k - 1 - i);
    }
    return s;
  }
  std::size_t sub_dim() const { return offsets_.size(); }

 private:
  std::uint64_t scatter_slow(std::uint64_t s) const {
    const std::size_t k = positions_.size();
    std::uint64_t full = 0;
    for (std::size_t i = 0; i < k; ++i) {
      full |= ((s >> (k - 1 - i)) & 1U) << positions_[i];
    }
    return full;
  }

  std::vector<int> positions_;
  std::vector<std::uint64_t> offsets_;
  std::uint64_t mask_ = 0;
};

struct Entry {
  std::uint64_t row;
  std::uint64_t col;
  Complex value;
};

std::vector<Entry> nonzeros(const Matrix& m) {
  std::vector<Entry> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m(r, c) != Complex{}) {
        out.push_back({static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c), m(r, c)});
      }
    }
  }
  return out;
}

void check_targets(const LinearOperator& op, const QubitSelection& targets, int register_size) {
  if (!op.is_square()) throw ArgumentError("local operator must be square");
  if (static_cast<std::size_t>(op.in_qubits()) != targets.size()) {
    throw ArgumentError("operator acts on " + std::to_string(op.in_qubits()) + " qubits but " +
                        std::to_string(targets.size()) + " targets were given");
  }
  targets.check_within(register_size);
}

// (op on targets) * in, in-place friendly: returns a fresh matrix.
Matrix apply_left(const Matrix& in, const LinearOperator& op, const QubitSelection& targets,
                  int register_size) {
  const BitScatter bits(targets.labels(), register_size);
  const auto nz = nonzeros(op.matrix());
  const auto dim = static_cast<std::uint64_t>(in.rows());
  Matrix out = Matrix::Zero(in.rows(), in.cols());
  for (Eigen::Index c = 0; c < in.cols(); ++c) {
    const Complex* src = in.col(c).data();
    Complex* dst = out.col(c).data();
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & bits.mask()) continue;
      for (const Entry& e : nz) {
        dst[base | bits.scatter(e.row)] += e.value * src[base | bits.scatter(e.col)];
      }
    }
  }
  return out;
}

Matrix apply_product_left(Matrix m, const KrausProduct& term, int register_size) {
  for (const LocalFactor& f : term) m = apply_left(m, f.op, f.targets, register_size);
  return m;
}

// The product as one dense matrix on `support` (ascending labels).
Matrix support_matrix(const KrausProduct& term, const std::vector<int>& support) {
  const int m = static_cast<int>(support.size());
  const Eigen::Index dim = Eigen::Index{1} << m;
  Matrix k = Matrix::Identity(dim, dim);
  for (const LocalFactor& f : term) {
    std::vector<int> local;
    for (int q : f.targets.labels()) {
      local.push_back(static_cast<int>(std::find(support.begin(), support.end(), q) - support.begin()) + 1);
    }
    const BitScatter bits(local, m);
    const auto nz = nonzeros(f.op.matrix());
    Matrix next = Matrix::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      for (std::uint64_t base = 0; base < static_cast<std::uint64_t>(dim); ++base) {
        if (base & bits.mask()) continue;
        for (const Entry& e : nz) {
          next(static_cast<Eigen::Index>(base | bits.scatter(e.row)), c) +=
              e.value * k(static_cast<Eigen::Index>(base | bits.scatter(e.col)), c);
        }
      }
    }
    k = std::move(next);
  }
  return k;
}

// out += K in K^dag for K given by its nonzeros on `support`.
void accumulate_sandwich(Matrix& out, const Matrix& in, const std::vector<Entry>& nz, const std::vector<int>& support,
                         int register_size) {
  const BitScatter s(support, register_size);
  std::vector<int> rest_labels;
  for (int q = 1; q <= register_size; ++q) {
    if (std::find(support.begin(), support.end(), q) == support.end()) rest_labels.push_back(q);
  }
  const BitScatter rest(rest_labels, register_size);
  const std::size_t rd = rest.sub_dim();
  for (std::size_t cb = 0; cb < rd; ++cb) {
    const std::uint64_t cbase = rest.scatter(cb);
    for (const Entry& right : nz) {
      const auto oc = static_cast<Eigen::Index>(cbase | s.scatter(right.row));
      const auto ic = static_cast<Eigen::Index>(cbase | s.scatter(right.col));
      const Complex wr = std::conj(right.value);
      for (std::size_t rb = 0; rb < rd; ++rb) {
        const std::uint64_t rbase = rest.scatter(rb);
        for (const Entry& left : nz) {
          out(static_cast<Eigen::Index>(rbase | s.scatter(left.row)), oc) +=
              left.value * wr * in(static_cast<Eigen::Index>(rbase | s.scatter(left.col)), ic);
        }
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// QubitSelection

QubitSelection::QubitSelection(std::initializer_list<int> labels)
    : QubitSelection(std::vector<int>(labels)) {}

QubitSelection::QubitSelection(std::vector<int> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 1) throw IndexError("qubit labels are 1-based, got " + std::to_string(labels_[i]));
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) {
        throw ArgumentError("duplicate qubit label " + std::to_string(labels_[i]));
      }
    }
  }
}

bool QubitSelection::contains(int label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

void QubitSelection::check_within(int register_size) const {
  for (int label : labels_) {
    if (label > register_size) {
      throw IndexError("qubit " + std::to_string(label) + " outside a " + std::to_string(register_size) +
                       "-qubit register");
    }
  }
}

QubitSelection QubitSelection::complement(int register_size) const {
  check_within(register_size);
  std::vector<int> rest;
  for (int q = 1; q <= register_size; ++q) {
    if (!contains(q)) rest.push_back(q);
  }
  return QubitSelection(std::move(rest));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(int num_qubits, Vector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits_ < 1) throw ArgumentError("a state needs at least one qubit");
  if (amplitudes_.size() != (Eigen::Index{1} << num_qubits_)) {
    throw ArgumentError("expected 2^" + std::to_string(num_qubits_) + " amplitudes, got " +
                        std::to_string(amplitudes_.size()));
  }
  require_finite(amplitudes_, "state");
}

PureState PureState::basis(int num_qubits, std::uint64_t index) {
  if (num_qubits < 1 || num_qubits > 62) throw ArgumentError("bad qubit count");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (index >= static_cast<std::uint64_t>(dim)) throw IndexError("basis index out of range");
  Vector v = Vector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(num_qubits, std::move(v));
}

namespace {
std::uint64_t parse_bits(std::string_view bits) {
  std::uint64_t index = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw ArgumentError("bit string may only contain 0 and 1");
    index = (index << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return index;
}
}  // namespace

PureState PureState::from_bits(std::string_view bits) {
  return basis(static_cast<int>(bits.size()), parse_bits(bits));
}

Complex PureState::amplitude(std::uint64_t index) const {
  if (index >= static_cast<std::uint64_t>(dim())) throw IndexError("amplitude index out of range");
  return amplitudes_(static_cast<Eigen::Index>(index));
}

Complex PureState::amplitude(std::string_view bits) const {
  if (static_cast<int>(bits.size()) != num_qubits_) {
    throw ArgumentError("bit string length does not match register");
  }
  return amplitude(parse_bits(bits));
}

bool PureState::is_normalized(double tol) const { return std::abs(amplitudes_.squaredNorm() - 1.0) <= tol; }

PureState PureState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ArgumentError("cannot normalise the zero vector");
  return PureState(num_qubits_, amplitudes_ / n);
}

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(int in_qubits, int out_qubits, Matrix entries, bool unitary)
    : in_qubits_(in_qubits), out_qubits_(out_qubits), entries_(std::move(entries)), unitary_(unitary) {
  if (in_qubits_ < 0 || out_qubits_ < 0) throw ArgumentError("negative qubit count");
  if (entries_.rows() != (Eigen::Index{1} << out_qubits_) || entries_.cols() != (Eigen::Index{1} << in_qubits_)) {
    throw ArgumentError("operator shape does not match qubit counts");
  }
  require_finite(entries_, "operator");
  if (unitary_) {
    if (in_qubits_ != out_qubits_) throw ArgumentError("a unitary must be square");
    const Matrix gram = entries_.adjoint() * entries_;
    const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (err > kExactTol) {
      std::ostringstream msg;
      msg << "operator flagged unitary but |O^dag O - I| = " << err;
      throw InvariantError(msg.str());
    }
  }
}

LinearOperator::LinearOperator(Matrix entries, bool unitary)
    : LinearOperator(qubits_for_dim(entries.rows()), qubits_for_dim(entries.cols()), entries, unitary) {}

LinearOperator LinearOperator::identity(int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  return LinearOperator(num_qubits, num_qubits, Matrix::Identity(dim, dim), true);
}

LinearOperator LinearOperator::adjoint() const {
  return LinearOperator(out_qubits_, in_qubits_, entries_.adjoint(), unitary_);
}

PureState LinearOperator::apply(const PureState& psi) const {
  if (psi.num_qubits() != in_qubits_) throw ArgumentError("operator/state dimension mismatch");
  return PureState(out_qubits_, entries_ * psi.amplitudes());
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const {
  if (rhs.out_qubits_ != in_qubits_) throw ArgumentError("operator composition dimension mismatch");
  return LinearOperator(rhs.in_qubits_, out_qubits_, entries_ * rhs.entries_, unitary_ && rhs.unitary_);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(int num_qubits, Matrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  if (num_qubits_ < 1) throw ArgumentError("a density matrix needs at least one qubit");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits_;
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw ArgumentError("density matrix must be 2^n x 2^n");
  }
  require_finite(entries_, "density matrix");
  const double herm = hermiticity_error();
  if (herm > kExactTol) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian (max |rho - rho^dag| = " << herm << ")";
    throw InvariantError(msg.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const Vector& v = psi.amplitudes();
  return DensityMatrix(psi.num_qubits(), v * v.adjoint());
}

double DensityMatrix::hermiticity_error() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Gates

namespace gates {

LinearOperator identity() { return LinearOperator::identity(1); }

LinearOperator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return LinearOperator(std::move(m), true);
}

LinearOperator pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return LinearOperator(std::move(m), true);
}

LinearOperator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return LinearOperator(std::move(m), true);
}

}  // namespace gates

// ---------------------------------------------------------------------------
// Free functions

namespace {
void check_cap(int total, int register_cap) {
  if (total > register_cap) {
    throw CapacityError("register of " + std::to_string(total) + " qubits exceeds the cap of " +
                        std::to_string(register_cap));
  }
}
}  // namespace

PureState tensor_product(const PureState& a, const PureState& b, int register_cap) {
  check_cap(a.num_qubits() + b.num_qubits(), register_cap);
  Vector v = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return PureState(a.num_qubits() + b.num_qubits(), std::move(v));
}

LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b, int register_cap) {
  check_cap(std::max(a.in_qubits() + b.in_qubits(), a.out_qubits() + b.out_qubits()), register_cap);
  Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return LinearOperator(a.in_qubits() + b.in_qubits(), a.out_qubits() + b.out_qubits(), std::move(m),
                        a.unitary() && b.unitary());
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, int register_cap) {
  check_cap(a.num_qubits() + b.num_qubits(), register_cap);
  Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return DensityMatrix(a.num_qubits() + b.num_qubits(), std::move(m));
}

LinearOperator embed_operator(const LinearOperator& op, const QubitSelection& targets, int register_size) {
  check_targets(op, targets, register_size);
  const BitScatter bits(targets.labels(), register_size);
  const auto dim = std::uint64_t{1} << register_size;
  Matrix full = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const Matrix& m = op.matrix();
  for (std::uint64_t c = 0; c < dim; ++c) {
    const std::uint64_t rest = c & ~bits.mask();
    const std::uint64_t j = bits.gather(c);
    for (std::uint64_t i = 0; i < bits.sub_dim(); ++i) {
      full(static_cast<Eigen::Index>(rest | bits.scatter(i)), static_cast<Eigen::Index>(c)) =
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return LinearOperator(register_size, register_size, std::move(full), op.unitary());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const QubitSelection& keep) {
  if (keep.empty()) throw ArgumentError("partial_trace needs at least one qubit to keep");
  const int n = rho.num_qubits();
  keep.check_within(n);
  const QubitSelection traced = keep.complement(n);
  const BitScatter kept(keep.labels(), n);
  const BitScatter gone(traced.labels(), n);
  const auto kd = static_cast<Eigen::Index>(kept.sub_dim());
  Matrix out = Matrix::Zero(kd, kd);
  const Matrix& m = rho.matrix();
  for (std::uint64_t t = 0; t < gone.sub_dim(); ++t) {
    const std::uint64_t toff = gone.scatter(t);
    for (Eigen::Index j = 0; j < kd; ++j) {
      const auto col = static_cast<Eigen::Index>(toff | kept.scatter(j));
      for (Eigen::Index i = 0; i < kd; ++i) {
        out(i, j) += m(static_cast<Eigen::Index>(toff | kept.scatter(i)), col);
      }
    }
  }
  return DensityMatrix(static_cast<int>(keep.size()), std::move(out));
}

double completeness_residual(std::span<const LinearOperator> terms) {
  if (terms.empty()) throw ArgumentError("empty Kraus set");
  const Eigen::Index dim = terms.front().matrix().cols();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const LinearOperator& k : terms) {
    if (k.matrix().cols() != dim) throw ArgumentError("Kraus terms disagree on input dimension");
    sum += k.matrix().adjoint() * k.matrix();
  }
  return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

namespace {
void require_complete(double residual) {
  if (residual > kExactTol) {
    std::ostringstream msg;
    msg << "Kraus set flagged trace-preserving violates completeness by " << residual;
    throw InvariantError(msg.str());
  }
}
}  // namespace

DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const LinearOperator> terms, KrausCheck check) {
  if (terms.empty()) throw ArgumentError("empty Kraus set");
  for (const LinearOperator& k : terms) {
    if (k.in_qubits() != rho.num_qubits() || k.out_qubits() != rho.num_qubits()) {
      throw ArgumentError("Kraus term does not act on the full register");
    }
  }
  if (check == KrausCheck::kTracePreserving) require_complete(completeness_residual(terms));
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const LinearOperator& k : terms) out.noalias() += k.matrix() * rho.matrix() * k.matrix().adjoint();
  return DensityMatrix(rho.num_qubits(), std::move(out));
}

namespace {
// sum_k K^dag K restricted to the union of all factor targets.
double product_completeness_residual(std::span<const KrausProduct> terms) {
  std::vector<int> support;
  for (const KrausProduct& term : terms) {
    for (const LocalFactor& f : term) {
      for (int q : f.targets.labels()) {
        if (std::find(support.begin(), support.end(), q) == support.end()) support.push_back(q);
      }
    }
  }
  std::sort(support.begin(), support.end());
  const int m = static_cast<int>(support.size());
  if (m == 0) return 0.0;
  const Eigen::Index dim = Eigen::Index{1} << m;
  Matrix sum = Matrix::Zero(dim, dim);
  for (const KrausProduct& term : terms) {
    Matrix k = Matrix::Identity(dim, dim);
    for (const LocalFactor& f : term) {
      std::vector<int> local;
      for (int q : f.targets.labels()) {
        local.push_back(static_cast<int>(std::find(support.begin(), support.end(), q) - support.begin()) + 1);
      }
      k = embed_operator(f.op, QubitSelection(std::move(local)), m).matrix() * k;
    }
    sum += k.adjoint() * k;
  }
  return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}
}  // namespace

DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const KrausProduct> terms, KrausCheck check) {
  if (terms.empty()) throw ArgumentError("empty Kraus set");
  const int n = rho.num_qubits();
  for (const KrausProduct& term : terms) {
    std::vector<int> seen;
    for (const LocalFactor& f : term) {
      check_targets(f.op, f.targets, n);
      for (int q : f.targets.labels()) {
        if (std::find(seen.begin(), seen.end(), q) != seen.end()) {
          throw ArgumentError("factors of a Kraus product must act on disjoint qubits");
        }
        seen.push_back(q);
      }
    }
  }
  if (check == KrausCheck::kTracePreserving) require_complete(product_completeness_residual(terms));
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const KrausProduct& term : terms) {
    std::vector<int> support;
    for (const LocalFactor& f : term) support.insert(support.end(), f.targets.labels().begin(), f.targets.labels().end());
    std::sort(support.begin(), support.end());
    const Matrix k = support_matrix(term, support);
    const auto nz = nonzeros(k);
    if (nz.size() <= 2 * static_cast<std::size_t>(k.rows())) {
      accumulate_sandwich(out, rho.matrix(), nz, support, n);
    } else {
      // K rho K^dag = (K (K rho)^dag)^dag
      const Matrix left = apply_product_left(rho.matrix(), term, n);
      out += apply_product_left(left.adjoint(), term, n).adjoint();
    }
  }
  return DensityMatrix(n, std::move(out));
}

DensityMatrix conjugate(const DensityMatrix& rho, const LinearOperator& op, const QubitSelection& targets) {
  const int n = rho.num_qubits();
  check_targets(op, targets, n);
  const Matrix left = apply_left(rho.matrix(), op, targets, n);
  return DensityMatrix(n, apply_left(left.adjoint(), op, targets, n).adjoint());
}

DensityMatrix project_out(const DensityMatrix& rho, const PureState& v, const QubitSelection& targets) {
  const int n = rho.num_qubits();
  targets.check_within(n);
  if (static_cast<std::size_t>(v.num_qubits()) != targets.size()) {
    throw ArgumentError("projected state size does not match the target count");
  }
  if (static_cast<int>(targets.size()) >= n) throw ArgumentError("project_out must leave at least one qubit");
  const QubitSelection rest = targets.complement(n);
  const BitScatter t(targets.labels(), n);
  const BitScatter r(rest.labels(), n);
  const Vector& amp = v.amplitudes();
  const Matrix& m = rho.matrix();
  const auto rd = static_cast<Eigen::Index>(r.sub_dim());
  const auto td = static_cast<Eigen::Index>(t.sub_dim());
  Matrix out = Matrix::Zero(rd, rd);
  for (Eigen::Index j = 0; j < rd; ++j) {
    for (Eigen::Index b = 0; b < td; ++b) {
      if (amp(b) == Complex{}) continue;
      const auto col = static_cast<Eigen::Index>(r.scatter(j) | t.scatter(b));
      for (Eigen::Index i = 0; i < rd; ++i) {
        Complex acc{};
        for (Eigen::Index a = 0; a < td; ++a) {
          acc += std::conj(amp(a)) * m(static_cast<Eigen::Index>(r.scatter(i) | t.scatter(a)), col);
        }
        out(i, j) += acc * amp(b);
      }
    }
  }
  return DensityMatrix(static_cast<int>(rest.size()), std::move(out));
}

PureState project_out(const PureState& psi, const PureState& bra, const QubitSelection& targets) {
  const int n = psi.num_qubits();
  targets.check_within(n);
  if (static_cast<std::size_t>(bra.num_qubits()) != targets.size()) {
    throw ArgumentError("projected state size does not match the target count");
  }
  if (static_cast<int>(targets.size()) >= n) throw ArgumentError("project_out must leave at least one qubit");
  const QubitSelection rest = targets.complement(n);
  const BitScatter t(targets.labels(), n);
  const BitScatter r(rest.labels(), n);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(r.sub_dim()));
  for (std::uint64_t i = 0; i < r.sub_dim(); ++i) {
    Complex acc{};
    for (std::uint64_t a = 0; a < t.sub_dim(); ++a) {
      acc += std::conj(bra.amplitudes()(static_cast<Eigen::Index>(a))) *
             psi.amplitudes()(static_cast<Eigen::Index>(r.scatter(i) | t.scatter(a)));
    }
    out(static_cast<Eigen::Index>(i)) = acc;
  }
  return PureState(static_cast<int>(rest.size()), std::move(out));
}

PureState place_qubits(const PureState& psi, const QubitSelection& placement) {
  const int n = psi.num_qubits();
  if (placement.size() != static_cast<std::size_t>(n)) throw ArgumentError("placement must name every qubit");
  placement.check_within(n);
  const BitScatter bits(placement.labels(), n);
  Vector out = Vector::Zero(psi.dim());
  for (std::uint64_t s = 0; s < bits.sub_dim(); ++s) {
    out(static_cast<Eigen::Index>(bits.scatter(s))) = psi.amplitudes()(static_cast<Eigen::Index>(s));
  }
  return PureState(n, std::move(out));
}

double fidelity_pure_vs_mixed(const PureState& psi, const DensityMatrix& rho) {
  if (psi.num_qubits() != rho.num_qubits()) throw ArgumentError("fidelity: dimension mismatch");
  if (!psi.is_normalized()) throw ArgumentError("fidelity: reference state must be normalized");
  const Complex f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  if (std::abs(f.imag()) >= kExactTol) {
    std::ostringstream msg;
    msg << "fidelity has imaginary part " << f.imag();
    throw InvariantError(msg.str());
  }
  return f.real();
}

}  // namespace jrsp
