#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdmodal/signal_model.hpp"
#include "rdmodal/tensor.hpp"

namespace rdmodal {

/// Real parameter vector [omega_{f,r} (f-major), alpha_{f,r}, lambda_f, phi_f]
/// with omega = 2 pi nu in radians per sample, lambda = |c| and phi = arg c.
class ThetaVector {
public:
    ThetaVector(std::size_t order, std::size_t modes);
    ThetaVector(std::size_t order, std::size_t modes, std::vector<double> values);

    static ThetaVector from_modes(std::span<const RdMode> modes);
    std::vector<RdMode> to_modes() const;

    std::size_t order() const noexcept { return order_; }
    std::size_t modes() const noexcept { return modes_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::size_t omega_index(std::size_t f, std::size_t r) const noexcept { return f * order_ + r; }
    std::size_t alpha_index(std::size_t f, std::size_t r) const noexcept { return (modes_ + f) * order_ + r; }
    std::size_t lambda_index(std::size_t f) const noexcept { return 2 * modes_ * order_ + f; }
    std::size_t phi_index(std::size_t f) const noexcept { return 2 * modes_ * order_ + modes_ + f; }

    double& operator[](std::size_t k) { return values_.at(k); }
    double operator[](std::size_t k) const { return values_.at(k); }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Throws std::invalid_argument unless every lambda_f > 0 and every value is finite.
    void validate() const;

private:
    std::size_t order_;
    std::size_t modes_;
    std::vector<double> values_;
};

/// Exponent of a_r in sample `flat` (0-based, last index fastest).
std::size_t index_map(std::size_t flat, std::size_t dim, std::span<const std::size_t> sizes);

/// Noise-free sample vector mu(theta) in storage order.
ComplexVector model_mean(const ThetaVector& theta, std::span<const std::size_t> sizes);

/// d mu / d theta, M x (2RF + 2F).
ComplexMatrix jacobian(const ThetaVector& theta, std::span<const std::size_t> sizes);

struct CrlbReport {
    std::vector<std::vector<double>> crlb_omega;  ///< [f][r], rad^2
    std::vector<std::vector<double>> crlb_alpha;  ///< [f][r]
    std::vector<double> crlb_lambda;
    std::vector<double> crlb_phi;
    double fisher_cond = 0.0;  ///< 2-norm condition number of Re{V^H V}
};

/// Bounds from the inverse Fisher matrix (sigma2 / 2) S^-1 [Re{V^H V}]^-1 S^-1
/// for circular white Gaussian noise of variance sigma2. Throws
/// EstimationError when the condition number of Re{V^H V} exceeds 1e12.
CrlbReport crlb_general(const ThetaVector& theta, double sigma2, std::span<const std::size_t> sizes);

struct SingleModeBounds {
    std::vector<double> omega;
    std::vector<double> alpha;
    double lambda = 0.0;
    double phi = 0.0;
};

/// Closed-form bounds for one mode. Each dimension enters through the
/// weighted moments of m under weights exp(2 alpha_r m), m = 0..M_r-1, so
/// alpha_r = 0 needs no special casing.
SingleModeBounds crlb_single_mode(std::span<const double> alpha, std::span<const std::size_t> sizes,
                                  double lambda, double sigma2);

/// Undamped single-mode limit 6 sigma2 / (lambda^2 M (M_r^2 - 1)).
double crlb_omega_undamped(std::span<const std::size_t> sizes, std::size_t dim, double lambda, double sigma2);

/// Undamped single-mode limit of CRLB(lambda) / lambda^2.
double crlb_phi_undamped(std::span<const std::size_t> sizes, double lambda, double sigma2);

}  // namespace rdmodal
