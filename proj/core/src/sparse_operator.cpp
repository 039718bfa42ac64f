#include "spinsim/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinsim {

void SparseOperator::apply(std::span<const Complex> x,
                           std::span<Complex> y) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n) {
    throw std::invalid_argument("SparseOperator::apply: size mismatch");
  }
  if (real_valued_) {
#pragma omp parallel for schedule(static) if (n >= 65536)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      Complex acc{0.0, 0.0};
      const std::uint64_t end = row_ptr_[i + 1];
      for (std::uint64_t k = row_ptr_[i]; k < end; ++k) {
        acc += rval_[k] * x[col_[k]];
      }
      y[i] = acc;
    }
  } else {
#pragma omp parallel for schedule(static) if (n >= 65536)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      Complex acc{0.0, 0.0};
      const std::uint64_t end = row_ptr_[i + 1];
      for (std::uint64_t k = row_ptr_[i]; k < end; ++k) {
        acc += cval_[k] * x[col_[k]];
      }
      y[i] = acc;
    }
  }
}

void SparseOperator::apply_real(std::span<const double> x,
                                std::span<double> y) const {
  const std::size_t n = dim();
  if (!real_valued_) {
    throw std::logic_error("apply_real called on a complex-valued operator");
  }
  if (x.size() != n || y.size() != n) {
    throw std::invalid_argument("SparseOperator::apply_real: size mismatch");
  }
#pragma omp parallel for schedule(static) if (n >= 65536)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    double acc = 0.0;
    const std::uint64_t end = row_ptr_[i + 1];
    for (std::uint64_t k = row_ptr_[i]; k < end; ++k) {
      acc += rval_[k] * x[col_[k]];
    }
    y[i] = acc;
  }
}

void SparseOperator::fill_dense_real(double* out, std::size_t leading) const {
  if (!real_valued_) {
    throw std::logic_error("fill_dense_real called on a complex operator");
  }
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      out[static_cast<std::size_t>(col_[k]) * leading + i] = rval_[k];
    }
  }
}

void SparseOperator::fill_dense_complex(Complex* out,
                                        std::size_t leading) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      out[static_cast<std::size_t>(col_[k]) * leading + i] = value(k);
    }
  }
}

bool SparseOperator::is_hermitian_within(double tol) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::uint32_t j = col_[k];
      const Complex v = value(k);
      // locate (j, i)
      const auto begin = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j]);
      const auto end = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j + 1]);
      const auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(i));
      if (it == end || *it != i) return false;
      const std::size_t kt = static_cast<std::size_t>(it - col_.begin());
      if (std::abs(v - std::conj(value(kt))) > tol) return false;
    }
  }
  return true;
}

SparseOperator SparseOperator::from_triplets(
    std::shared_ptr<const SpinBasis> basis, std::vector<Triplet> entries,
    bool hermitian) {
  const std::size_t n = basis->dimension();
  for (const Triplet& t : entries) {
    if (t.row >= n || t.col >= n) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseOperator op;
  op.basis_ = std::move(basis);
  op.hermitian_ = hermitian;
  op.row_ptr_.assign(n + 1, 0);
  bool all_real = true;
  std::vector<std::uint32_t> cols;
  std::vector<Complex> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    Complex sum{0.0, 0.0};
    while (j < entries.size() && entries[j].row == entries[i].row &&
           entries[j].col == entries[i].col) {
      sum += entries[j].value;
      ++j;
    }
    cols.push_back(entries[i].col);
    vals.push_back(sum);
    if (sum.imag() != 0.0) all_real = false;
    op.row_ptr_[entries[i].row + 1] += 1;
    i = j;
  }
  for (std::size_t i = 0; i < n; ++i) op.row_ptr_[i + 1] += op.row_ptr_[i];
  op.col_ = std::move(cols);
  if (all_real) {
    op.real_valued_ = true;
    op.rval_.resize(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k) op.rval_[k] = vals[k].real();
  } else {
    op.real_valued_ = false;
    op.cval_ = std::move(vals);
  }
  if (hermitian && !op.is_hermitian_within(0.0)) {
    throw std::invalid_argument(
        "from_triplets: hermitian flag set but entries are not paired");
  }
  return op;
}

SparseOperator SparseOperator::identity(std::shared_ptr<const SpinBasis> basis) {
  const std::size_t n = basis->dimension();
  SparseOperator op;
  op.basis_ = std::move(basis);
  op.hermitian_ = true;
  op.real_valued_ = true;
  op.row_ptr_.resize(n + 1);
  op.col_.resize(n);
  op.rval_.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    op.row_ptr_[i] = i;
    op.col_[i] = static_cast<std::uint32_t>(i);
  }
  op.row_ptr_[n] = n;
  return op;
}

std::vector<Complex> matvec(const SparseOperator& op, const StateVector& v) {
  if (op.basis().get() != v.basis.get() &&
      (op.dim() != v.dimension() || !op.basis() || !v.basis ||
       op.basis()->n_sites() != v.basis->n_sites() ||
       op.basis()->sector() != v.basis->sector())) {
    throw std::invalid_argument("matvec: operator and state basis mismatch");
  }
  std::vector<Complex> y(v.amp.size());
  op.apply(v.amp, y);
  return y;
}

Complex expectation(const SparseOperator& op, const StateVector& v) {
  const std::vector<Complex> y = matvec(op, v);
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < y.size(); ++i) s += std::conj(v.amp[i]) * y[i];
  return s;
}

}  // namespace spinsim
