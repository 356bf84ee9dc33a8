#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rdmodal/mtsm.hpp"
#include "rdmodal/signal_model.hpp"
#include "rdmodal/stsm.hpp"

namespace rdmodal {

enum class Estimator { stsm, mtsm };

std::string_view to_string(Estimator e) noexcept;
Estimator parse_estimator(std::string_view text);

/// Everything that determines the output of one Monte-Carlo experiment.
struct ExperimentConfig {
    std::string signal_name = "signal1";  ///< preset name, or "custom"
    SignalSpec signal;                    ///< resolved signal
    std::vector<double> snr_db{5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    std::size_t trials = 200;
    std::uint64_t master_seed = 1;
    Estimator estimator = Estimator::stsm;
    MultigridConfig multigrid;
    std::size_t k_iters = 2;
    bool perturb_grid = true;
    double perturb_fraction = 0.25;  ///< per-point jitter, as a fraction of the initial spacing
    std::vector<std::size_t> dim_permutation;  ///< empty: identity
    std::string output = "rdmodal";
    std::size_t threads = 0;  ///< 0: hardware concurrency

    ExperimentConfig();

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;

    MtsmConfig mtsm_config() const;
};

/// "a:b:step" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_snr_range(std::string_view text);

/// Applies one `key = value` setting. Throws std::invalid_argument for an
/// unknown key or a malformed value. `mode` appends to the signal's mode
/// list; `signal` replaces the whole signal with a preset.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Reads `key = value` lines ('#' starts a comment) on top of `base`. The
/// first `mode` line discards the modes inherited from `base`.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Resolved configuration in the same format, readable by parse_config().
std::string format_config(const ExperimentConfig& cfg);

}  // namespace rdmodal
