#include "rdmodal/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rdmodal/assignment.hpp"
#include "rdmodal/rng.hpp"

namespace rdmodal {

Complex RdMode::coordinate(std::size_t dim) const
{
    return mode_coordinate(freqs.at(dim), damps.at(dim));
}

void RdMode::validate(std::size_t expected_order) const
{
    if (freqs.size() != expected_order || damps.size() != expected_order)
        throw std::invalid_argument("mode has " + std::to_string(freqs.size()) + " frequencies and " +
                                    std::to_string(damps.size()) + " damping factors, expected " +
                                    std::to_string(expected_order));
    for (std::size_t r = 0; r < expected_order; ++r) {
        if (!(freqs[r] >= 0.0 && freqs[r] < 1.0))
            throw std::invalid_argument("mode frequency must lie in [0, 1)");
        if (!(damps[r] <= 0.0))
            throw std::invalid_argument("mode damping factor must be <= 0");
    }
}

void SignalSpec::validate() const
{
    if (sizes.empty())
        throw std::invalid_argument("signal must have at least one dimension");
    for (std::size_t s : sizes)
        if (s == 0)
            throw std::invalid_argument("signal dimensions must be positive");
    if (modes.empty())
        throw std::invalid_argument("signal must contain at least one mode");
    for (const auto& m : modes)
        m.validate(sizes.size());
}

Complex mode_coordinate(double freq, double damp)
{
    return std::exp(Complex{damp, 2.0 * std::numbers::pi * freq});
}

ComplexVector mode_vector(Complex a, std::size_t length)
{
    ComplexVector v(static_cast<Eigen::Index>(length));
    Complex p{1.0, 0.0};
    for (Eigen::Index m = 0; m < v.size(); ++m) {
        v[m] = p;
        p *= a;
    }
    return v;
}

ComplexTensor synthesize(const SignalSpec& spec)
{
    spec.validate();
    ComplexTensor out(spec.sizes);
    std::vector<ComplexVector> factors(spec.order());
    for (const auto& mode : spec.modes) {
        for (std::size_t r = 0; r < spec.order(); ++r)
            factors[r] = mode_vector(mode.coordinate(r), spec.sizes[r]);
        out += rank1(mode.amplitude, factors);
    }
    return out;
}

ComplexTensor add_noise(const ComplexTensor& t, const NoiseSpec& noise)
{
    if (!(noise.sigma2 >= 0.0))
        throw std::invalid_argument("noise variance must be non-negative");
    ComplexTensor out = t;
    if (noise.sigma2 == 0.0)
        return out;
    Rng rng(noise.seed);
    for (Complex& v : out.data())
        v += rng.complex_normal(noise.sigma2);
    return out;
}

double sigma_for_snr(const ComplexTensor& t, double snr_db)
{
    const double energy = frob_norm(t);
    if (energy == 0.0)
        throw std::invalid_argument("SNR is undefined for a zero signal");
    const double power = energy * energy / static_cast<double>(t.numel());
    return power * std::pow(10.0, -snr_db / 10.0);
}

double wrapped_freq_diff(double a, double b) noexcept
{
    double d = a - b;
    d -= std::floor(d + 0.5);
    return d;
}

std::vector<std::size_t> match_modes(std::span<const RdMode> truth, std::span<const RdMode> estimates)
{
    if (truth.size() != estimates.size())
        throw std::invalid_argument("estimate count " + std::to_string(estimates.size()) +
                                    " does not match true mode count " + std::to_string(truth.size()));
    const auto n = static_cast<Eigen::Index>(truth.size());
    Eigen::MatrixXd cost(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& t = truth[static_cast<std::size_t>(i)];
            const auto& e = estimates[static_cast<std::size_t>(j)];
            if (e.order() != t.order())
                throw std::invalid_argument("estimated mode has the wrong number of dimensions");
            double c = 0.0;
            for (std::size_t r = 0; r < t.order(); ++r) {
                const double d = wrapped_freq_diff(e.freqs[r], t.freqs[r]);
                c += d * d;
            }
            cost(i, j) = c;
        }
    }
    return solve_assignment(cost);
}

SquaredErrors trial_squared_errors(const SignalSpec& truth, std::span<const RdMode> estimates)
{
    const auto match = match_modes(truth.modes, estimates);
    SquaredErrors err;
    for (std::size_t f = 0; f < truth.modes.size(); ++f) {
        const auto& t = truth.modes[f];
        const auto& e = estimates[match[f]];
        for (std::size_t r = 0; r < t.order(); ++r) {
            const double df = wrapped_freq_diff(e.freqs[r], t.freqs[r]);
            const double da = e.damps[r] - t.damps[r];
            err.freq += df * df;
            err.damp += da * da;
        }
    }
    return err;
}

double total_rmse(const SignalSpec& truth, std::span<const std::vector<RdMode>> trials, ErrorKind which)
{
    if (trials.empty())
        throw std::invalid_argument("total_rmse needs at least one trial");
    double acc = 0.0;
    for (const auto& trial : trials) {
        const auto e = trial_squared_errors(truth, trial);
        acc += which == ErrorKind::frequency ? e.freq : e.damp;
    }
    const double rf = static_cast<double>(truth.order() * truth.modes.size());
    return std::sqrt(acc / static_cast<double>(trials.size()) / rf);
}

std::size_t count_pairing_errors(const SignalSpec& truth, std::span<const RdMode> estimates)
{
    const auto match = match_modes(truth.modes, estimates);
    std::size_t errors = 0;
    for (std::size_t f = 0; f < truth.modes.size(); ++f) {
        const auto& est = estimates[match[f]];
        bool mispaired = false;
        for (std::size_t r = 0; r < truth.order() && !mispaired; ++r) {
            const double own = std::abs(wrapped_freq_diff(est.freqs[r], truth.modes[f].freqs[r]));
            for (const auto& other : truth.modes) {
                const double d = std::abs(wrapped_freq_diff(est.freqs[r], other.freqs[r]));
                // Identical true values in this dimension are interchangeable.
                if (d < own && std::abs(wrapped_freq_diff(other.freqs[r], truth.modes[f].freqs[r])) > 1e-12) {
                    mispaired = true;
                    break;
                }
            }
        }
        if (mispaired)
            ++errors;
    }
    return errors;
}

}  // namespace rdmodal
