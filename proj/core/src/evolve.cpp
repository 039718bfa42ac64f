#include "spinsim/evolve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "spinsim/protocols.hpp"
#include "spinsim/spectral.hpp"

namespace spinsim {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr std::size_t kAutoDenseLimit = 64;
constexpr std::size_t kDenseLimit = 4096;
constexpr double kStepNormTol = 1e-10;

Backend resolve_backend(Backend requested, std::size_t dim) {
  if (requested != Backend::Auto) return requested;
  return dim <= kAutoDenseLimit ? Backend::Dense : Backend::Krylov;
}

/// Lanczos action of exp(-i h dt) on a unit vector, with workspace reused
/// across steps. The basis is built by the plain three-term recurrence; for
/// the short expansions used here (krylov_dim ~ 20, ||H|| dt < 1) the loss
/// of orthogonality stays far below the local tolerance.
class KrylovStepper {
 public:
  KrylovStepper(std::size_t dim, int m)
      : m_(std::max(4, m)), V_(dim, std::min<std::size_t>(m_, dim)),
        w_(dim), alpha_(m_), beta_(m_) {}

  // psi must be unit norm; returns |1 - norm| of the raw result before
  // renormalization.
  double advance(const SparseOperator& h, double dt, double tol,
                 VectorXcd& psi) {
    const std::size_t dim = static_cast<std::size_t>(psi.size());
    const int m = static_cast<int>(V_.cols());
    int k = m;
    bool invariant = false;  // Krylov space closed early (exact result)
    double b_last = 0.0;
    V_.col(0) = psi;
    for (int j = 0; j < m; ++j) {
      h.apply({V_.col(j).data(), dim}, {w_.data(), dim});
      if (j > 0) w_ -= beta_(j - 1) * V_.col(j - 1);
      alpha_(j) = V_.col(j).dot(w_).real();
      w_ -= alpha_(j) * V_.col(j);
      const double b = w_.norm();
      if (j + 1 == m) {
        b_last = b;
        break;
      }
      if (b <= 1e-12) {
        k = j + 1;
        invariant = true;
        break;
      }
      beta_(j) = b;
      V_.col(j + 1) = w_ / b;
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    es.computeFromTridiagonal(alpha_.head(k), beta_.head(k - 1));
    const VectorXd& theta = es.eigenvalues();
    const MatrixXd& q = es.eigenvectors();
    VectorXcd weights(k);
    for (int i = 0; i < k; ++i) {
      weights(i) = std::polar(1.0, -dt * theta(i)) * q(0, i);
    }
    const VectorXcd small = q * weights;

    if (!invariant && b_last > 0.0) {
      const double est = b_last * std::abs(dt) * std::abs(small(k - 1));
      if (est > std::max(tol, 1e-14)) {
        std::ostringstream msg;
        msg << "Krylov step did not converge (local error estimate " << est
            << " > tol " << tol << " at krylov_dim " << m
            << "); increase krylov_dim or reduce dt";
        throw std::runtime_error(msg.str());
      }
    }

    psi.noalias() = V_.leftCols(k) * small;
    const double nrm = psi.norm();
    if (nrm <= 0.0) throw std::runtime_error("Krylov step annihilated the state");
    psi /= nrm;
    return std::abs(nrm - 1.0);
  }

 private:
  int m_;
  MatrixXcd V_;
  VectorXcd w_;
  VectorXd alpha_, beta_;
};

/// Exact per-step propagator via full eigendecomposition of H(t).
class DenseStepper {
 public:
  explicit DenseStepper(std::size_t dim) : dim_(dim) {
    if (dim > kDenseLimit) {
      throw std::invalid_argument(
          "dense backend is limited to dimension 4096; use the Krylov backend");
    }
  }

  double advance(const SparseOperator& h, double dt, double /*tol*/,
                 VectorXcd& psi) {
    const int n = static_cast<int>(dim_);
    if (h.real_valued()) {
      hr_.setZero(n, n);  // fill_dense_* scatter into a zeroed buffer
      h.fill_dense_real(hr_.data(), dim_);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(hr_);
      const MatrixXd& u = es.eigenvectors();
      VectorXcd z = (u.transpose() * psi.real()).cast<Complex>();
      z.imag() = u.transpose() * psi.imag();
      for (int i = 0; i < n; ++i) z(i) *= std::polar(1.0, -dt * es.eigenvalues()(i));
      psi.real() = u * z.real();
      psi.imag() = u * z.imag();
    } else {
      hc_.setZero(n, n);
      h.fill_dense_complex(hc_.data(), dim_);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hc_);
      VectorXcd z = es.eigenvectors().adjoint() * psi;
      for (int i = 0; i < n; ++i) z(i) *= std::polar(1.0, -dt * es.eigenvalues()(i));
      psi.noalias() = es.eigenvectors() * z;
    }
    const double nrm = psi.norm();
    psi /= nrm;
    return std::abs(nrm - 1.0);
  }

 private:
  std::size_t dim_;
  MatrixXd hr_;
  MatrixXcd hc_;
};

/// Backend-erased stepper so the protocol loop is written once.
class Stepper {
 public:
  Stepper(Backend requested, std::size_t dim, const PropagatorConfig& cfg)
      : backend_(resolve_backend(requested, dim)), tol_(cfg.tol) {
    if (cfg.krylov_dim < 4) {
      throw std::invalid_argument("PropagatorConfig: krylov_dim must be >= 4");
    }
    if (backend_ == Backend::Krylov) {
      krylov_.emplace(dim, cfg.krylov_dim);
    } else {
      dense_.emplace(dim);
    }
  }

  double advance(const SparseOperator& h, double dt, VectorXcd& psi) {
    const double drift = backend_ == Backend::Krylov
                             ? krylov_->advance(h, dt, tol_, psi)
                             : dense_->advance(h, dt, tol_, psi);
    if (drift > kStepNormTol) {
      std::ostringstream msg;
      msg << "propagation step lost unitarity (norm drift " << drift
          << "); increase krylov_dim or reduce dt";
      throw std::runtime_error(msg.str());
    }
    return drift;
  }

 private:
  Backend backend_;
  double tol_;
  std::optional<KrylovStepper> krylov_;
  std::optional<DenseStepper> dense_;
};

VectorXcd to_eigen(const StateVector& v) {
  return Eigen::Map<const VectorXcd>(v.amp.data(),
                                     static_cast<Eigen::Index>(v.amp.size()));
}

double fidelity_against(const StateVector& target, const VectorXcd& psi) {
  Complex ov = 0.0;
  const std::size_t dim = target.amp.size();
  for (std::size_t i = 0; i < dim; ++i) {
    ov += std::conj(target.amp[i]) * psi(static_cast<Eigen::Index>(i));
  }
  return std::norm(ov);
}

void check_same_basis(const StateVector& a, const SparseOperator& h) {
  const auto& ba = *a.basis;
  const auto& bh = *h.basis();
  if (a.basis.get() != h.basis().get() &&
      (ba.n_sites() != bh.n_sites() || ba.sector() != bh.sector())) {
    throw std::invalid_argument("state and operator live on different bases");
  }
}

}  // namespace

StateVector step(const StateVector& state, const SparseOperator& h, double dt,
                 const PropagatorConfig& cfg) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step: dt must be finite and non-negative");
  }
  if (!h.hermitian()) {
    throw std::invalid_argument("step: operator is not marked Hermitian");
  }
  check_same_basis(state, h);
  StateVector out = state;
  if (dt == 0.0) return out;
  VectorXcd psi = to_eigen(state);
  const double nrm = psi.norm();
  if (nrm <= 0.0) throw std::invalid_argument("step: state has zero norm");
  psi /= nrm;
  Stepper stepper(cfg.backend, state.amp.size(), cfg);
  stepper.advance(h, dt, psi);
  psi *= nrm;
  Eigen::Map<VectorXcd>(out.amp.data(), psi.size()) = psi;
  return out;
}

Trajectory run_protocol(const StateVector& initial, const RampSchedule& schedule,
                        const DisorderRealization& realization,
                        const StateVector& target, const PropagatorConfig& cfg,
                        double t_end) {
  const auto basis = initial.basis;
  const int n = basis->n_sites();
  const int nb = n - 1;
  if (schedule.n_sites != n) {
    throw std::invalid_argument("run_protocol: schedule/site-count mismatch");
  }
  if (!(schedule.ramp_time > 0.0)) {
    throw std::invalid_argument("run_protocol: ramp_time must be positive");
  }
  if (t_end < schedule.ramp_time) {
    throw std::invalid_argument("run_protocol: t_end must be >= ramp_time");
  }
  if (!(cfg.dt > 0.0)) {
    throw std::invalid_argument("run_protocol: dt must be positive");
  }
  if (!realization.static_eps.empty() &&
      realization.static_eps.size() != static_cast<std::size_t>(nb)) {
    throw std::invalid_argument("run_protocol: static_eps length mismatch");
  }

  // Effective couplings of the disorder channels (see header): frozen fields
  // enter as B/2 (coupling to spin-1/2 operators), white-noise draws as
  // sqrt(J dt) * draw.
  FieldConfig fields_eff = FieldConfig::zeros(n);
  if (!realization.fields.b.empty()) {
    if (realization.fields.b.size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("run_protocol: field count mismatch");
    }
    for (int site = 0; site < n; ++site) {
      for (int c = 0; c < 3; ++c) {
        fields_eff.b[static_cast<std::size_t>(site)][static_cast<std::size_t>(c)] =
            0.5 * realization.fields.b[static_cast<std::size_t>(site)]
                                      [static_cast<std::size_t>(c)];
      }
    }
  }

  const double ramp_t = schedule.ramp_time;
  const auto n_ramp = std::max<std::int64_t>(1, std::llround(ramp_t / cfg.dt));
  const double dt_eff = ramp_t / static_cast<double>(n_ramp);
  std::int64_t n_post = 0;
  if (t_end > ramp_t) {
    n_post = static_cast<std::int64_t>(
        std::ceil((t_end - ramp_t) / dt_eff - 1e-9));
  }
  const std::int64_t total = n_ramp + n_post;
  const double white_scale = std::sqrt(schedule.j_base * dt_eff);

  HamiltonianAssembler assembler(basis, fields_eff);
  Stepper stepper(cfg.backend, basis->dimension(), cfg);

  VectorXcd psi = to_eigen(initial);
  const double nrm0 = psi.norm();
  if (nrm0 <= 0.0) {
    throw std::invalid_argument("run_protocol: initial state has zero norm");
  }
  psi /= nrm0;

  Trajectory traj;
  traj.schedule = schedule;
  traj.realization_index = realization.index;
  traj.noise_seed = realization.noise_seed;
  traj.dt_eff = dt_eff;
  traj.n_steps = static_cast<std::uint64_t>(total);
  const int observe = std::max(1, cfg.observe_every);
  traj.times.reserve(static_cast<std::size_t>(total / observe) + 3);
  traj.fidelities.reserve(traj.times.capacity());
  traj.times.push_back(0.0);
  traj.fidelities.push_back(fidelity_against(target, psi));

  std::vector<double> eps_white;
  for (std::int64_t j = 0; j < total; ++j) {
    const double t_mid = (static_cast<double>(j) + 0.5) * dt_eff;
    std::span<const double> noise{};
    if (realization.eta > 0.0) {
      eps_white = white_noise_at(realization, static_cast<std::uint64_t>(j), nb);
      for (double& e : eps_white) e *= white_scale;
      noise = eps_white;
    }
    const CouplingProfile profile =
        couplings_at(schedule, t_mid, realization.static_eps, noise);
    const SparseOperator& h = assembler.update(profile);
    const double drift = stepper.advance(h, dt_eff, psi);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);

    const std::int64_t done = j + 1;
    const double t_now = static_cast<double>(done) * dt_eff;
    const bool at_ramp_end = done == n_ramp;
    const bool at_final = done == total;
    const bool in_window = done > n_ramp;
    const bool observed = done % observe == 0 || at_ramp_end || at_final;
    if (observed || in_window) {
      const double f = fidelity_against(target, psi);
      if (at_ramp_end) traj.fidelity_at_ramp_end = f;
      if (in_window && f > traj.peak_fidelity) {
        traj.peak_fidelity = f;
        traj.peak_time = t_now;
      }
      if (observed) {
        traj.times.push_back(t_now);
        traj.fidelities.push_back(f);
      }
    }
  }

  if (n_post == 0) {
    traj.peak_fidelity = traj.fidelity_at_ramp_end;
    traj.peak_time = ramp_t;
  }
  traj.final_state = StateVector(basis);
  Eigen::Map<VectorXcd>(traj.final_state.amp.data(), psi.size()) = psi;
  return traj;
}

double convergence_check(const StateVector& initial,
                         const RampSchedule& schedule,
                         const PropagatorConfig& cfg, const StateVector& target) {
  DisorderRealization clean;
  PropagatorConfig half = cfg;
  half.dt = cfg.dt / 2.0;
  const double f1 = run_protocol(initial, schedule, clean, target, cfg,
                                 schedule.ramp_time)
                        .fidelity_at_ramp_end;
  const double f2 = run_protocol(initial, schedule, clean, target, half,
                                 schedule.ramp_time)
                        .fidelity_at_ramp_end;
  return std::abs(f1 - f2);
}

double find_tmin(RampKind kind, int n_sites, double threshold,
                 double resolution, const TminOptions& opts) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("find_tmin: threshold must be in (0, 1)");
  }
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("find_tmin: resolution must be positive");
  }
  auto basis = build_basis(n_sites, 0);
  const ProtocolStates states = protocol_states(basis, kind, opts.payload);
  DisorderRealization clean;

  auto fidelity_at = [&](double ramp_time) {
    RampSchedule schedule{kind, n_sites, ramp_time, 1.0};
    return run_protocol(states.initial, schedule, clean, states.target,
                        opts.prop, ramp_time)
        .fidelity_at_ramp_end;
  };

  // Seed the scan from the adiabatic heuristic T ~ (1/gap)^2 of the final
  // uniform Hamiltonian; it underestimates badly for transfer, so it only
  // sets the starting point, never the bracket.
  CouplingProfile uniform;
  uniform.j.assign(static_cast<std::size_t>(n_sites - 1), 1.0);
  const double gap =
      energy_gap(build_hamiltonian(basis, uniform, FieldConfig::zeros(n_sites)));
  const double t_heur = gap > 0.0 ? 1.0 / (gap * gap) : 1.0;

  double lo = std::max(resolution, 0.5 * t_heur);
  if (lo > opts.t_max) lo = resolution;

  // Already above threshold at the seed: walk down to the first T below.
  if (fidelity_at(lo) >= threshold) {
    double t = lo;
    while (t - resolution >= resolution) {
      const double t_try = t - resolution;
      if (fidelity_at(t_try) >= threshold) {
        t = t_try;
      } else {
        return t;
      }
    }
    return t;
  }

  // Forward scan to the FIRST crossing. The step is capped at a small
  // multiple of the resolution: F(T) oscillates above the first crossing,
  // and the first above-threshold excursion can be a hump not much wider
  // than the resolution itself (width ~0.35 for transfer at N = 14,
  // threshold 0.99), so any stride much larger than the resolution risks
  // stepping over it and reporting a later crossing as the minimum.
  const double h_cap = 5.0 * resolution;
  double hi = -1.0;
  double t = lo;
  while (true) {
    const double h =
        std::clamp(0.35 * std::max(t, t_heur), 2.0 * resolution, h_cap);
    const double t_next = t + h;
    if (t_next > opts.t_max) {
      std::ostringstream msg;
      msg << "find_tmin: fidelity never reached " << threshold
          << " below t_max = " << opts.t_max;
      throw std::runtime_error(msg.str());
    }
    if (fidelity_at(t_next) >= threshold) {
      hi = t_next;
      break;
    }
    lo = t_next;
    t = t_next;
  }

  // Bisect inside the bracketing cell.
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (fidelity_at(mid) >= threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Polish downward at the requested resolution in case the cell interior
  // dips back under the threshold between lo and the crossing.
  while (hi - resolution > resolution) {
    const double t_try = hi - resolution;
    if (fidelity_at(t_try) < threshold) break;
    hi = t_try;
  }
  return hi;
}

}  // namespace spinsim
