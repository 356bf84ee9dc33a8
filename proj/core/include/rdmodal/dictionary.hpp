#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdmodal/tensor.hpp"

namespace rdmodal {

enum class GridKind { frequency, damping };

/// Sorted 1-D grid of candidate frequencies (on the circle [0, 1)) or damping
/// factors (on [beta_min, 0]).
class Grid1D {
public:
    static Grid1D frequency(std::vector<double> points);
    static Grid1D damping(std::vector<double> points, double beta_min);

    GridKind kind() const noexcept { return kind_; }
    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const { return points_.at(i); }

    /// Lower edge of the parameter interval (0 for frequency, beta_min for damping).
    double lower() const noexcept { return lower_; }
    /// Upper edge (1 for frequency, 0 for damping).
    double upper() const noexcept { return upper_; }

    /// Largest gap between consecutive points (frequency grids include the
    /// wrap-around gap).
    double max_spacing() const;

    /// Largest of the gaps from point i to its two neighbours.
    double local_spacing(std::size_t i) const;

private:
    Grid1D(std::vector<double> points, GridKind kind, double lower, double upper);

    std::vector<double> points_;
    GridKind kind_ = GridKind::frequency;
    double lower_ = 0.0;
    double upper_ = 1.0;
};

/// {0, 1/n, ..., (n-1)/n}; n >= 2.
Grid1D uniform_freq_grid(std::size_t n);

/// n equispaced points from beta_min to 0 inclusive; n >= 2, beta_min < 0.
Grid1D uniform_damp_grid(std::size_t n, double beta_min);

struct AtomLabel {
    double freq;
    double damp;
};

/// Unit-norm modal atoms with their (frequency, damping) labels.
struct Dictionary {
    ComplexMatrix atoms;
    std::vector<AtomLabel> labels;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t length() const noexcept { return static_cast<std::size_t>(atoms.rows()); }
};

/// sum_{m=0}^{length-1} exp(x m), evaluated through expm1 so small |x| stays accurate.
double geometric_sum(double x, std::size_t length);

/// a(mu, beta) / ||a(mu, beta)||_2 with a = [1, z, ..., z^(length-1)], z = exp(beta + j 2 pi mu).
ComplexVector modal_atom(double freq, double damp, std::size_t length);

/// One atom per (mu, beta) pair; damping-major column order, i.e. all
/// frequencies for the first damping value, then the second, and so on.
Dictionary build_dictionary(const Grid1D& freqs, const Grid1D& damps, std::size_t length);

/// Harmonic dictionary (beta = 0 for every atom).
Dictionary harmonic_dictionary(const Grid1D& freqs, std::size_t length);

/// Modal dictionary anchored at a single frequency.
Dictionary damping_dictionary(double freq, const Grid1D& damps, std::size_t length);

/// One refinement step: for every active index, inserts `eta` equispaced
/// points strictly inside each of the two intervals adjoining it. Frequency
/// grids wrap modulo 1 at the ends; damping grids clamp to [beta_min, 0].
/// Original points are kept and near-duplicates (1e-14) merged.
Grid1D dicref(const Grid1D& grid, std::span<const std::size_t> active, std::size_t eta);

/// Half-width of the reliable capture zone of the undamped single-tone
/// objective: the offset zeta in (0, 1/length) at which the main lobe falls to
/// the height of the first side lobe. Requires length >= 3.
double compute_zeta(std::size_t length);

/// compute_zeta() for length >= 3, and 1/2 for shorter signals.
double capture_half_width(std::size_t length);

}  // namespace rdmodal
