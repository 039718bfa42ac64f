#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "spinsim/basis.hpp"
#include "spinsim/state.hpp"

namespace spinsim {

/// Sparse matrix over a SpinBasis in CSR layout, with columns sorted within
/// each row. Hamiltonians without transverse fields are real symmetric and
/// are stored with real values (half the bandwidth of the complex path, which
/// dominates large trajectory runs). Immutable from the caller's point of
/// view once built; safely shared across threads.
class SparseOperator {
 public:
  SparseOperator() = default;

  const std::shared_ptr<const SpinBasis>& basis() const { return basis_; }
  std::size_t dim() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nnz() const { return col_.size(); }
  bool hermitian() const { return hermitian_; }
  bool real_valued() const { return real_valued_; }

  const std::vector<std::uint64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint32_t>& col() const { return col_; }
  Complex value(std::size_t k) const {
    return real_valued_ ? Complex{rval_[k], 0.0} : cval_[k];
  }

  /// y = A x. Low-level kernel; sizes must match dim().
  void apply(std::span<const Complex> x, std::span<Complex> y) const;

  /// Real-arithmetic kernel; only valid when real_valued().
  void apply_real(std::span<const double> x, std::span<double> y) const;

  /// Scatter into a zero-initialized dense column-major dim x dim buffer
  /// (leading dimension = dim). The real variant requires real_valued().
  void fill_dense_real(double* out, std::size_t leading) const;
  void fill_dense_complex(Complex* out, std::size_t leading) const;

  /// Entry-by-entry Hermiticity check (exact pairing up to `tol`).
  bool is_hermitian_within(double tol) const;

  /// Assembles from unordered triplets. With hermitian = true, each strictly
  /// lower entry must pair with the conjugate upper entry; unmatched pairs
  /// are rejected so the flag cannot lie.
  struct Triplet {
    std::uint32_t row, col;
    Complex value;
  };
  static SparseOperator from_triplets(std::shared_ptr<const SpinBasis> basis,
                                      std::vector<Triplet> entries,
                                      bool hermitian);

  static SparseOperator identity(std::shared_ptr<const SpinBasis> basis);

 private:
  friend class HamiltonianAssembler;

  std::shared_ptr<const SpinBasis> basis_;
  std::vector<std::uint64_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> rval_;    // used when real_valued_
  std::vector<Complex> cval_;   // used otherwise
  bool real_valued_ = true;
  bool hermitian_ = false;
};

/// A·v as a bare amplitude array; does not normalize. Basis mismatch between
/// operator and state is rejected.
std::vector<Complex> matvec(const SparseOperator& op, const StateVector& v);

/// <v|A|v>.
Complex expectation(const SparseOperator& op, const StateVector& v);

}  // namespace spinsim
