#include "spinsim/ensemble.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace {

using spinsim::Backend;
using spinsim::DisorderSpec;
using spinsim::EnsembleStats;
using spinsim::Payload;
using spinsim::PropagatorConfig;
using spinsim::ProtocolSpec;
using spinsim::RampKind;
using spinsim::run_ensemble;

PropagatorConfig fast_config() {
  PropagatorConfig cfg;
  cfg.backend = Backend::Auto;
  cfg.dt = 0.02;
  cfg.observe_every = 1 << 20;
  return cfg;
}

ProtocolSpec small_prep() {
  ProtocolSpec p;
  p.kind = RampKind::GroundPrep;
  p.n_sites = 6;
  p.ramp_time = 1.5;
  p.t_end = 1.5;
  return p;
}

TEST(ResolvedTEnd, DefaultsPerProtocol) {
  ProtocolSpec prep;
  prep.kind = RampKind::GroundPrep;
  prep.ramp_time = 2.9;
  EXPECT_DOUBLE_EQ(prep.resolved_t_end(), 2.9);

  ProtocolSpec transfer;
  transfer.kind = RampKind::Transfer;
  transfer.ramp_time = 11.36;
  EXPECT_DOUBLE_EQ(transfer.resolved_t_end(), 16.36);

  transfer.t_end = 12.0;
  EXPECT_DOUBLE_EQ(transfer.resolved_t_end(), 12.0);
}

TEST(RunEnsemble, CleanEnsembleIsDegenerate) {
  DisorderSpec disorder;
  disorder.n_realizations = 4;
  const EnsembleStats stats =
      run_ensemble(small_prep(), disorder, fast_config(), 1);
  ASSERT_EQ(stats.fidelities.size(), 4u);
  for (double f : stats.fidelities) {
    EXPECT_EQ(f, stats.fidelities[0]);
  }
  EXPECT_EQ(stats.std_error, 0.0);
  EXPECT_GT(stats.mean_fidelity, 0.9);
}

TEST(RunEnsemble, StatsMatchReturnedSamples) {
  DisorderSpec disorder;
  disorder.delta = 0.2;
  disorder.b_nuc = 0.1;
  disorder.n_realizations = 12;
  disorder.master_seed = 31;
  const EnsembleStats stats =
      run_ensemble(small_prep(), disorder, fast_config(), 2);
  ASSERT_EQ(stats.fidelities.size(), 12u);
  const double mean =
      std::accumulate(stats.fidelities.begin(), stats.fidelities.end(), 0.0) /
      12.0;
  double ss = 0.0;
  for (double f : stats.fidelities) ss += (f - mean) * (f - mean);
  const double se = std::sqrt(ss / 11.0 / 12.0);
  EXPECT_NEAR(stats.mean_fidelity, mean, 1e-15);
  EXPECT_NEAR(stats.std_error, se, 1e-15);
  EXPECT_GT(stats.std_error, 0.0);
}

TEST(RunEnsemble, ResultsIndependentOfWorkerCount) {
  ProtocolSpec protocol;
  protocol.kind = RampKind::Transfer;
  protocol.n_sites = 6;
  protocol.ramp_time = 3.0;
  protocol.payload = Payload::Triplet;
  DisorderSpec disorder;
  disorder.delta = 0.1;
  disorder.eta = 0.1;
  disorder.b_nuc = 0.05;
  disorder.n_realizations = 8;
  disorder.master_seed = 5;

  const EnsembleStats serial =
      run_ensemble(protocol, disorder, fast_config(), 1);
  const EnsembleStats pooled =
      run_ensemble(protocol, disorder, fast_config(), 3);
  ASSERT_EQ(serial.fidelities.size(), pooled.fidelities.size());
  for (std::size_t i = 0; i < serial.fidelities.size(); ++i) {
    EXPECT_EQ(serial.fidelities[i], pooled.fidelities[i]) << "index " << i;
    EXPECT_EQ(serial.peaks[i], pooled.peaks[i]) << "index " << i;
  }
  EXPECT_EQ(serial.mean_fidelity, pooled.mean_fidelity);
  EXPECT_EQ(serial.std_error, pooled.std_error);
  EXPECT_EQ(serial.mean_peak, pooled.mean_peak);
}

TEST(RunEnsemble, FieldsWidenTheBasisAutomatically) {
  // With frozen random fields the dynamics leaves the magnetization sector;
  // the ensemble must still run (full basis) and report sane fidelities.
  ProtocolSpec protocol = small_prep();
  DisorderSpec disorder;
  disorder.b_nuc = 0.1;
  disorder.n_realizations = 3;
  const EnsembleStats stats =
      run_ensemble(protocol, disorder, fast_config(), 1);
  for (double f : stats.fidelities) {
    EXPECT_GT(f, 0.5);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
}

TEST(RunEnsemble, TransferReportsPeakStatistics) {
  ProtocolSpec protocol;
  protocol.kind = RampKind::Transfer;
  protocol.n_sites = 6;
  protocol.ramp_time = 4.0;  // t_end defaults to ramp + 5
  DisorderSpec disorder;
  disorder.delta = 0.05;
  disorder.n_realizations = 3;
  const EnsembleStats stats =
      run_ensemble(protocol, disorder, fast_config(), 1);
  ASSERT_EQ(stats.peaks.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_GE(stats.peaks[i], stats.fidelities[i] - 1e-12);
  }
  EXPECT_GE(stats.mean_peak, stats.mean_fidelity - 1e-12);
}

TEST(RunEnsemble, ValidatesInput) {
  DisorderSpec disorder;
  disorder.n_realizations = 0;
  EXPECT_THROW(run_ensemble(small_prep(), disorder, fast_config(), 1),
               std::invalid_argument);

  ProtocolSpec bad = small_prep();
  bad.ramp_time = -1.0;
  DisorderSpec ok;
  ok.n_realizations = 1;
  EXPECT_THROW(run_ensemble(bad, ok, fast_config(), 1), std::exception);
}

TEST(RunEnsemble, FailuresCarryRealizationContext) {
  ProtocolSpec protocol = small_prep();
  DisorderSpec disorder;
  disorder.n_realizations = 2;
  PropagatorConfig cfg = fast_config();
  cfg.dt = -0.5;  // forces a failure inside the per-realization run
  try {
    run_ensemble(protocol, disorder, cfg, 1);
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("realization"), std::string::npos);
  }
}

}  // namespace
