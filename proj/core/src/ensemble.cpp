#include "spinsim/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace spinsim {

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
  MeanSe out;
  const std::size_t n = xs.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double var = ss / static_cast<double>(n - 1);
    out.se = std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

}  // namespace

EnsembleStats run_ensemble(const ProtocolSpec& protocol,
                           const DisorderSpec& disorder,
                           const PropagatorConfig& cfg, int n_workers) {
  if (disorder.n_realizations < 1) {
    throw std::invalid_argument("run_ensemble: need at least one realization");
  }
  const int n = protocol.n_sites;
  // Frozen random fields break Sz conservation, so they need the full space;
  // everything else lives in the zero-magnetization sector.
  auto basis = disorder.b_nuc > 0.0 ? build_basis(n, std::nullopt)
                                    : build_basis(n, 0);
  const ProtocolStates states =
      protocol_states(basis, protocol.kind, protocol.payload);
  const RampSchedule schedule{protocol.kind, n, protocol.ramp_time, 1.0};
  const double t_end = protocol.resolved_t_end();

  const int n_real = disorder.n_realizations;
  EnsembleStats stats;
  stats.fidelities.assign(static_cast<std::size_t>(n_real), 0.0);
  stats.peaks.assign(static_cast<std::size_t>(n_real), 0.0);

  unsigned workers = n_workers > 0
                         ? static_cast<unsigned>(n_workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_real));

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  int failed_index = -1;
  std::exception_ptr first_error;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const int idx = next.fetch_add(1, std::memory_order_relaxed);
      if (idx >= n_real) return;
      try {
        const DisorderRealization realization =
            sample_realization(disorder, n, idx);
        const Trajectory traj = run_protocol(states.initial, schedule,
                                             realization, states.target, cfg,
                                             t_end);
        stats.fidelities[static_cast<std::size_t>(idx)] =
            traj.fidelity_at_ramp_end;
        stats.peaks[static_cast<std::size_t>(idx)] = traj.peak_fidelity;
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) {
          first_error = std::current_exception();
          failed_index = idx;
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "run_ensemble: realization " << failed_index
          << " failed: " << e.what();
      throw std::runtime_error(msg.str());
    }
  }

  const MeanSe f = mean_and_se(stats.fidelities);
  stats.mean_fidelity = f.mean;
  stats.std_error = f.se;
  const MeanSe p = mean_and_se(stats.peaks);
  stats.mean_peak = p.mean;
  stats.peak_std_error = p.se;
  return stats;
}

}  // namespace spinsim
