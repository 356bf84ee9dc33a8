#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rdmodal/dictionary.hpp"
#include "rdmodal/signal_model.hpp"
#include "rdmodal/tensor.hpp"

namespace rdmodal {

/// Settings of the two-step (frequency, then damping) multigrid search.
struct MultigridConfig {
    std::size_t n_freq0 = 50;   ///< initial frequency grid size
    std::size_t n_damp0 = 10;   ///< initial damping grid size
    double beta_min = -0.05;    ///< lower edge of the damping interval
    std::size_t eta_nu = 21;    ///< points inserted per side, frequency refinement
    std::size_t eta_alpha = 11; ///< points inserted per side, damping refinement
    std::size_t levels = 2;     ///< refinement depth L (L + 1 sparse solves per pass)
    double freq_tol = 0.0;      ///< stop refining once the local frequency spacing is <= this (0: off)
    double damp_tol = 0.0;      ///< same for damping
    /// Replaces the uniform n_freq0-point initial frequency grid when set.
    std::optional<Grid1D> freq_grid0;

    void validate() const;
};

enum StsmFlag : unsigned {
    kDampingSkipped = 1u << 0,     ///< dimension shorter than 3 samples; damping reported as 0
    kCoarseInitialGrid = 1u << 1,  ///< initial frequency spacing >= 2 zeta_M, convergence not guaranteed
    kFrequencyEarlyStop = 1u << 2,
    kDampingEarlyStop = 1u << 3,
};

/// Outcome of one multigrid pass: the final selection and the selection made
/// at each level (path[l] for l = 0..levels, shorter on early stop).
struct PassResult {
    double value = 0.0;
    std::vector<double> path;
    bool early_stop = false;
};

/// Frequency multigrid pass with harmonic dictionaries over the columns of `y`.
PassResult frequency_pass(const ComplexMatrix& y, const MultigridConfig& cfg);

/// Damping multigrid pass with modal dictionaries anchored at `freq`.
PassResult damping_pass(const ComplexMatrix& y, double freq, const MultigridConfig& cfg);

struct DimensionEstimate {
    std::size_t dim = 0;
    double freq = 0.0;
    double damp = 0.0;
    unsigned flags = 0;
    std::vector<double> freq_path;
    std::vector<double> damp_path;
};

/// Single-tone sparse multigrid estimation on the listed dimensions (0-based).
/// Throws std::invalid_argument for an empty dimension list or a dimension
/// of size 1.
std::vector<DimensionEstimate> stsm(const ComplexTensor& y, const MultigridConfig& cfg,
                                    std::span<const std::size_t> dims);

/// STSM on every dimension, plus the least-squares amplitude of the
/// resulting rank-1 model.
RdMode stsm_mode(const ComplexTensor& y, const MultigridConfig& cfg);

}  // namespace rdmodal
