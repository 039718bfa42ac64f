#include "spinsim/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "spinsim/rng.hpp"

namespace spinsim {

namespace {

using Eigen::Index;

template <typename Scalar>
void apply_op(const SparseOperator& h,
              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
              Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y);

template <>
void apply_op<Complex>(const SparseOperator& h,
                       const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
  h.apply(std::span<const Complex>(x.data(), static_cast<std::size_t>(x.size())),
          std::span<Complex>(y.data(), static_cast<std::size_t>(y.size())));
}

// Real path: valid only for real-valued operators; halves memory traffic.
template <>
void apply_op<double>(const SparseOperator& h,
                      const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  h.apply_real(
      std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
      std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
}

template <typename Scalar>
StateVector to_state(std::shared_ptr<const SpinBasis> basis,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& col) {
  StateVector v;
  v.basis = std::move(basis);
  v.amp.resize(static_cast<std::size_t>(col.size()));
  for (Index i = 0; i < col.size(); ++i) {
    v.amp[static_cast<std::size_t>(i)] = col[i];
  }
  return v;
}

void fix_phase(StateVector& v) {
  std::size_t imax = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.amp.size(); ++i) {
    const double a = std::abs(v.amp[i]);
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  if (best <= 0.0) return;
  const Complex rot = std::conj(v.amp[imax]) / best;
  for (auto& a : v.amp) a *= rot;
  v.amp[imax] = Complex{std::abs(v.amp[imax]), 0.0};
}

template <typename Scalar>
void random_fill(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v,
                 rng::SplitMix64& gen) {
  for (Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      v[i] = rng::gaussian(gen);
    } else {
      v[i] = Complex{rng::gaussian(gen), rng::gaussian(gen)};
    }
  }
}

// Thick-restart Lanczos for the lowest nev eigenpairs of a Hermitian
// operator. Every step fully reorthogonalizes (two classical Gram-Schmidt
// passes) and accumulates the exact projected matrix T = V^H H V, so T is
// trustworthy even after restarts or breakdowns; on restart the lowest Ritz
// pairs are kept and iteration continues from the residual direction.
template <typename Scalar>
SpectralResult lanczos_lowest(const SparseOperator& h, int nev,
                              const LanczosOptions& opts) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index dim = static_cast<Index>(h.dim());
  const int m = std::min<int>(opts.max_basis, static_cast<int>(dim));
  if (nev > m / 2) {
    throw std::invalid_argument(
        "lowest_eigenpairs: nev too large for max_basis");
  }

  Mat V(dim, m);
  Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
  rng::SplitMix64 gen(rng::derive(opts.seed, 0x1a2b3c4dULL, h.dim()));

  Vec w(dim);
  {
    Vec v0(dim);
    random_fill(v0, gen);
    v0.normalize();
    V.col(0) = v0;
  }

  int k = 0;  // kept Ritz pairs at the head of V after a restart
  double worst_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    double beta_m = 0.0;
    for (int j = k; j < m; ++j) {
      apply_op<Scalar>(h, V.col(j), w);
      for (int pass = 0; pass < 2; ++pass) {
        const auto coeff = (V.leftCols(j + 1).adjoint() * w).eval();
        w.noalias() -= V.leftCols(j + 1) * coeff;
        for (int i = 0; i <= j; ++i) {
          const double c = std::real(Complex(coeff[i]));
          Tm(i, j) += c;
          if (i != j) Tm(j, i) = Tm(i, j);
        }
      }
      const double beta = w.norm();
      if (j + 1 < m) {
        if (beta < 1e-13) {
          // Invariant subspace found; continue in a fresh random direction
          // (no coupling entry: the projected matrix stays exact because
          // every column of T is recomputed from actual projections).
          Vec r(dim);
          random_fill(r, gen);
          for (int pass = 0; pass < 2; ++pass) {
            const auto c2 = (V.leftCols(j + 1).adjoint() * r).eval();
            r.noalias() -= V.leftCols(j + 1) * c2;
          }
          const double rn = r.norm();
          if (rn < 1e-13) {
            // Space exhausted; shrink the working basis to what exists.
            beta_m = 0.0;
            break;
          }
          V.col(j + 1) = r / rn;
        } else {
          V.col(j + 1) = w / beta;
        }
      } else {
        beta_m = beta;
        if (beta >= 1e-13) w /= beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& Y = es.eigenvectors();

    bool converged = true;
    worst_residual = 0.0;
    for (int i = 0; i < nev; ++i) {
      const double est = std::abs(beta_m * Y(m - 1, i));
      worst_residual = std::max(worst_residual, est);
      if (est > opts.tol * std::max(1.0, std::abs(theta[i]))) {
        converged = false;
      }
    }

    if (converged) {
      SpectralResult out;
      for (int i = 0; i < nev; ++i) {
        Vec x = (V * Y.col(i).cast<Scalar>()).eval();
        x.normalize();
        apply_op<Scalar>(h, x, w);
        const double e = std::real(Complex(x.dot(w)));
        out.energies.push_back(e);
        out.residuals.push_back((w - Scalar(e) * x).norm());
        out.states.push_back(to_state<Scalar>(h.basis(), x));
      }
      return out;
    }
    if (restart == opts.max_restarts) break;

    // Thick restart: keep the lowest Ritz pairs, continue from the residual.
    const int keep = std::min(m - 1, std::max(2 * nev, nev + 6));
    Mat Vk(dim, keep);
    Vk.noalias() = V.leftCols(m) * Y.leftCols(keep).cast<Scalar>();
    V.leftCols(keep) = Vk;
    Tm.setZero();
    for (int i = 0; i < keep; ++i) Tm(i, i) = theta[i];
    if (beta_m < 1e-13) {
      Vec r(dim);
      random_fill(r, gen);
      for (int pass = 0; pass < 2; ++pass) {
        const auto c2 = (V.leftCols(keep).adjoint() * r).eval();
        r.noalias() -= V.leftCols(keep) * c2;
      }
      w = r / r.norm();
    }
    V.col(keep) = w;
    k = keep;
  }
  throw std::runtime_error(
      "lowest_eigenpairs: Lanczos failed to converge after " +
      std::to_string(opts.max_restarts) + " restarts (last residual estimate " +
      std::to_string(worst_residual) + ")");
}

}  // namespace

SpectralResult lowest_eigenpairs(const SparseOperator& h, int nev,
                                 const LanczosOptions& opts) {
  if (!h.hermitian()) {
    throw std::invalid_argument(
        "lowest_eigenpairs: operator must be Hermitian");
  }
  if (nev < 1) throw std::invalid_argument("lowest_eigenpairs: nev >= 1");
  const std::size_t dim = h.dim();
  if (nev > static_cast<int>(dim)) {
    throw std::invalid_argument("lowest_eigenpairs: nev exceeds dimension");
  }
  // Small problems: dense is exact, cheap, and free of convergence concerns.
  if (dim <= 256 || static_cast<int>(dim) <= 3 * nev + 8) {
    SpectralResult full = dense_oracle(h);
    SpectralResult out;
    out.energies.assign(full.energies.begin(), full.energies.begin() + nev);
    out.residuals.assign(full.residuals.begin(), full.residuals.begin() + nev);
    out.states.assign(full.states.begin(), full.states.begin() + nev);
    return out;
  }
  if (h.real_valued()) return lanczos_lowest<double>(h, nev, opts);
  return lanczos_lowest<Complex>(h, nev, opts);
}

SpectralResult ground_state(const SparseOperator& h,
                            const LanczosOptions& opts) {
  SpectralResult r = lowest_eigenpairs(h, 1, opts);
  fix_phase(r.states[0]);
  return r;
}

double energy_gap(const SparseOperator& h, const LanczosOptions& opts) {
  constexpr double kDegenTol = 1e-8;
  const int dim = static_cast<int>(h.dim());
  for (int nev = 2; nev <= 16; nev *= 2) {
    SpectralResult r = lowest_eigenpairs(h, std::min(nev, dim), opts);
    for (std::size_t i = 1; i < r.energies.size(); ++i) {
      if (r.energies[i] > r.energies[0] + kDegenTol) {
        return r.energies[i] - r.energies[0];
      }
    }
    if (static_cast<int>(r.energies.size()) == dim) return 0.0;
  }
  throw std::runtime_error(
      "energy_gap: no level found above the ground state within the first 16 "
      "eigenvalues (degeneracy tolerance 1e-8)");
}

SpectralResult dense_oracle(const SparseOperator& h) {
  const std::size_t dim = h.dim();
  if (dim > 4096) {
    throw std::invalid_argument(
        "dense_oracle: dimension " + std::to_string(dim) + " exceeds 4096");
  }
  if (!h.hermitian()) {
    throw std::invalid_argument("dense_oracle: operator must be Hermitian");
  }
  SpectralResult out;
  const Index n = static_cast<Index>(dim);
  if (h.real_valued()) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    h.fill_dense_real(M.data(), dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    for (Index i = 0; i < n; ++i) {
      Eigen::VectorXd x = es.eigenvectors().col(i);
      out.energies.push_back(es.eigenvalues()[i]);
      out.residuals.push_back((M * x - es.eigenvalues()[i] * x).norm());
      out.states.push_back(to_state<double>(h.basis(), x));
    }
  } else {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    h.fill_dense_complex(reinterpret_cast<Complex*>(M.data()), dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    for (Index i = 0; i < n; ++i) {
      Eigen::VectorXcd x = es.eigenvectors().col(i);
      out.energies.push_back(es.eigenvalues()[i]);
      out.residuals.push_back((M * x - es.eigenvalues()[i] * x).norm());
      out.states.push_back(to_state<Complex>(h.basis(), x));
    }
  }
  return out;
}

}  // namespace spinsim
