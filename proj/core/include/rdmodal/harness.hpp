#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rdmodal/config.hpp"
#include "rdmodal/dictionary.hpp"
#include "rdmodal/rng.hpp"
#include "rdmodal/signal_model.hpp"

namespace rdmodal {

struct ResultRow {
    double snr_db = 0.0;
    double rmse_freq_total = 0.0;
    double rmse_damp_total = 0.0;
    double sqrt_crlb_freq_total = 0.0;  ///< frequency bound in cycles per sample
    double sqrt_crlb_damp_total = 0.0;
    double mean_runtime_ms = 0.0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t pairing_errors = 0;  ///< mispaired modes summed over successful trials
};

struct TrialOutcome {
    bool failed = false;
    std::string error;
    std::vector<RdMode> estimates;  ///< in the signal's original dimension order
    SquaredErrors squared;
    std::size_t pairing_errors = 0;
    double runtime_ms = 0.0;
    std::vector<double> residual_norms;  ///< MTSM only
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<std::vector<TrialOutcome>> outcomes;  ///< [snr index][trial]
};

/// Initial frequency grid of n points with each point moved by an
/// independent uniform offset in [-fraction/n, fraction/n], wrapped and sorted.
Grid1D perturbed_freq_grid(std::size_t n, double fraction, Rng& rng);

/// Root of the mean (over modes and dimensions) CRLB: {frequency in cycles
/// per sample, damping}.
struct CrlbTotals {
    double freq = 0.0;
    double damp = 0.0;
};
CrlbTotals crlb_totals(const SignalSpec& spec, double sigma2);

/// One Monte-Carlo trial; estimator errors are caught and reported in the outcome.
TrialOutcome run_trial(const ExperimentConfig& cfg, double snr_db, std::size_t trial);

/// Every (SNR, trial) pair, run on cfg.threads workers. The result does not
/// depend on the number of threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Results table without timing, so identical configurations give identical bytes.
std::string results_csv(const std::vector<ResultRow>& rows);
std::string timing_csv(const std::vector<ResultRow>& rows);
std::string curves_dat(const std::vector<ResultRow>& rows);
std::string meta_text(const ExperimentConfig& cfg);

/// Writes <prefix>_results.csv, _timing.csv, _meta.txt and _curves.dat.
/// Throws std::runtime_error on I/O failure.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

struct ScalingConfig {
    Estimator estimator = Estimator::mtsm;
    std::vector<std::size_t> leading_sizes{64, 128, 256, 512};
    std::size_t repeats = 10;
    double snr_db = 20.0;
    std::uint64_t master_seed = 1;
    MultigridConfig multigrid;
};

struct ScalingRow {
    std::size_t m1 = 0;
    double mean_ms = 0.0;
    double std_ms = 0.0;
};

/// Wall time of one estimation vs the leading dimension size. MTSM runs use
/// the signal2 modes on (M_1, 4, 4); STSM runs use the signal1 mode on (M_1, 10).
std::vector<ScalingRow> run_scaling(const ScalingConfig& cfg);
std::string scaling_csv(const std::vector<ScalingRow>& rows);

/// Least-squares slope of log(mean_ms) against log(M_1).
double fit_exponent(const std::vector<ScalingRow>& rows);

}  // namespace rdmodal
