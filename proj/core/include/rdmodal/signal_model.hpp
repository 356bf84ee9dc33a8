#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rdmodal/tensor.hpp"

namespace rdmodal {

/// One R-D damped complex exponential. Frequencies are normalized (cycles
/// per sample, in [0, 1)); damping factors are per-sample log-decay rates
/// and must be <= 0.
struct RdMode {
    std::vector<double> freqs;
    std::vector<double> damps;
    Complex amplitude{1.0, 0.0};

    std::size_t order() const noexcept { return freqs.size(); }

    /// exp(damp + j 2 pi freq) for dimension `dim`.
    Complex coordinate(std::size_t dim) const;

    /// Throws std::invalid_argument on out-of-range parameters.
    void validate(std::size_t expected_order) const;
};

struct SignalSpec {
    std::vector<std::size_t> sizes;
    std::vector<RdMode> modes;

    std::size_t order() const noexcept { return sizes.size(); }
    void validate() const;
};

struct NoiseSpec {
    double sigma2 = 0.0;
    std::uint64_t seed = 0;
};

enum class ErrorKind { frequency, damping };

Complex mode_coordinate(double freq, double damp);

/// [1, a, a^2, ..., a^(length-1)]
ComplexVector mode_vector(Complex a, std::size_t length);

/// Noise-free CP synthesis: sum_f c_f a_{f,1} o ... o a_{f,R}.
ComplexTensor synthesize(const SignalSpec& spec);

/// Adds i.i.d. circular complex Gaussian noise of variance sigma2 (each of
/// the real and imaginary parts has variance sigma2 / 2). sigma2 == 0 returns
/// an exact copy.
ComplexTensor add_noise(const ComplexTensor& t, const NoiseSpec& noise);

/// Noise variance for a target SNR, with SNR defined as mean per-sample
/// signal power ||t||^2 / M over sigma^2.
double sigma_for_snr(const ComplexTensor& t, double snr_db);

/// Signed difference a - b wrapped onto [-0.5, 0.5).
double wrapped_freq_diff(double a, double b) noexcept;

/// Matches estimated modes to true modes by minimum total squared (wrapped)
/// frequency distance. Returns est_index[f] for each true mode f.
std::vector<std::size_t> match_modes(std::span<const RdMode> truth, std::span<const RdMode> estimates);

struct SquaredErrors {
    double freq = 0.0;  ///< sum over (f, r) of squared frequency errors
    double damp = 0.0;  ///< sum over (f, r) of squared damping errors
};

/// Squared-error sums of one trial after optimal matching.
SquaredErrors trial_squared_errors(const SignalSpec& truth, std::span<const RdMode> estimates);

/// sqrt( (1/RF) * mean over trials of sum_{f,r} (xi - xi_hat)^2 ).
double total_rmse(const SignalSpec& truth, std::span<const std::vector<RdMode>> trials, ErrorKind which);

/// Number of matched estimated modes whose R-tuple is mispaired: in some
/// dimension the estimate lies closer to a different true frequency value
/// than to the one of the true mode it was matched to.
std::size_t count_pairing_errors(const SignalSpec& truth, std::span<const RdMode> estimates);

}  // namespace rdmodal
