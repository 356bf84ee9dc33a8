#include "rdmodal/stsm.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "rdmodal/errors.hpp"
#include "rdmodal/somp.hpp"

namespace rdmodal {

namespace {

std::size_t select_single(const ComplexMatrix& y, const Dictionary& dict)
{
    const auto sol = somp(y, dict, SompConfig{});
    if (sol.omega.empty())
        throw EstimationError("multigrid pass: no atom selected (zero data)");
    return sol.omega.front();
}

}  // namespace

void MultigridConfig::validate() const
{
    if (n_freq0 < 2 && !freq_grid0)
        throw std::invalid_argument("n_freq0 must be >= 2");
    if (n_damp0 < 2)
        throw std::invalid_argument("n_damp0 must be >= 2");
    if (!(beta_min < 0.0))
        throw std::invalid_argument("beta_min must be negative");
    if (eta_nu == 0 || eta_alpha == 0)
        throw std::invalid_argument("refinement counts must be >= 1");
    if (freq_tol < 0.0 || damp_tol < 0.0)
        throw std::invalid_argument("early-stop tolerances must be >= 0");
    if (freq_grid0 && freq_grid0->kind() != GridKind::frequency)
        throw std::invalid_argument("freq_grid0 must be a frequency grid");
}

PassResult frequency_pass(const ComplexMatrix& y, const MultigridConfig& cfg)
{
    const auto length = static_cast<std::size_t>(y.rows());
    Grid1D grid = cfg.freq_grid0 ? *cfg.freq_grid0 : uniform_freq_grid(cfg.n_freq0);
    PassResult out;
    for (std::size_t level = 0;; ++level) {
        const std::size_t idx = select_single(y, harmonic_dictionary(grid, length));
        out.value = grid[idx];
        out.path.push_back(out.value);
        if (level == cfg.levels)
            break;
        if (cfg.freq_tol > 0.0 && grid.local_spacing(idx) <= cfg.freq_tol) {
            out.early_stop = true;
            break;
        }
        const std::size_t active[] = {idx};
        grid = dicref(grid, active, cfg.eta_nu);
    }
    return out;
}

PassResult damping_pass(const ComplexMatrix& y, double freq, const MultigridConfig& cfg)
{
    const auto length = static_cast<std::size_t>(y.rows());
    Grid1D grid = uniform_damp_grid(cfg.n_damp0, cfg.beta_min);
    PassResult out;
    for (std::size_t level = 0;; ++level) {
        const std::size_t idx = select_single(y, damping_dictionary(freq, grid, length));
        out.value = grid[idx];
        out.path.push_back(out.value);
        if (level == cfg.levels)
            break;
        if (cfg.damp_tol > 0.0 && grid.local_spacing(idx) <= cfg.damp_tol) {
            out.early_stop = true;
            break;
        }
        const std::size_t active[] = {idx};
        grid = dicref(grid, active, cfg.eta_alpha);
    }
    return out;
}

std::vector<DimensionEstimate> stsm(const ComplexTensor& y, const MultigridConfig& cfg,
                                    std::span<const std::size_t> dims)
{
    cfg.validate();
    if (dims.empty())
        throw std::invalid_argument("stsm: no dimensions requested");

    std::vector<DimensionEstimate> out;
    out.reserve(dims.size());
    for (std::size_t dim : dims) {
        if (dim >= y.order())
            throw std::out_of_range("stsm: dimension " + std::to_string(dim) + " out of range");
        const std::size_t length = y.size(dim);
        if (length < 2)
            throw std::invalid_argument("stsm: dimension " + std::to_string(dim) +
                                        " has a single sample, frequency is unidentifiable");

        const ComplexMatrix unfolded = unfold(y, dim);
        DimensionEstimate est;
        est.dim = dim;

        const double initial_spacing =
            cfg.freq_grid0 ? cfg.freq_grid0->max_spacing() : 1.0 / static_cast<double>(cfg.n_freq0);
        if (initial_spacing >= 2.0 * capture_half_width(length))
            est.flags |= kCoarseInitialGrid;

        auto freq = frequency_pass(unfolded, cfg);
        est.freq = freq.value;
        est.freq_path = std::move(freq.path);
        if (freq.early_stop)
            est.flags |= kFrequencyEarlyStop;

        if (length < 3) {
            est.flags |= kDampingSkipped;
        } else {
            auto damp = damping_pass(unfolded, est.freq, cfg);
            est.damp = damp.value;
            est.damp_path = std::move(damp.path);
            if (damp.early_stop)
                est.flags |= kDampingEarlyStop;
        }
        out.push_back(std::move(est));
    }
    return out;
}

RdMode stsm_mode(const ComplexTensor& y, const MultigridConfig& cfg)
{
    std::vector<std::size_t> dims(y.order());
    std::iota(dims.begin(), dims.end(), std::size_t{0});
    const auto estimates = stsm(y, cfg, dims);

    RdMode mode;
    std::vector<ComplexVector> factors;
    for (const auto& e : estimates) {
        mode.freqs.push_back(e.freq);
        mode.damps.push_back(e.damp);
        factors.push_back(mode_vector(mode_coordinate(e.freq, e.damp), y.size(e.dim)));
    }
    const ComplexTensor model = rank1(Complex{1.0, 0.0}, factors);
    Complex num{};
    double den = 0.0;
    for (std::size_t i = 0; i < y.numel(); ++i) {
        num += std::conj(model[i]) * y[i];
        den += std::norm(model[i]);
    }
    mode.amplitude = num / den;
    return mode;
}

}  // namespace rdmodal
