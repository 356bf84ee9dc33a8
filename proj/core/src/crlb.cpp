#include "rdmodal/crlb.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rdmodal/dictionary.hpp"
#include "rdmodal/errors.hpp"

namespace rdmodal {

namespace {

constexpr double kMaxFisherCond = 1e12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_shape(const ThetaVector& theta, std::span<const std::size_t> sizes)
{
    if (sizes.size() != theta.order())
        throw std::invalid_argument("crlb: sizes has " + std::to_string(sizes.size()) +
                                    " dimensions, theta has " + std::to_string(theta.order()));
    for (std::size_t m : sizes)
        if (m == 0)
            throw std::invalid_argument("crlb: zero-length dimension");
    theta.validate();
}

// z_f(i) = prod_r a_{f,r}^{t_{i,r}} for every sample, plus the exponents.
struct Samples {
    ComplexMatrix z;                          // M x F
    std::vector<std::vector<std::size_t>> t;  // [i][r]
};

Samples mode_samples(const ThetaVector& theta, std::span<const std::size_t> sizes)
{
    const std::size_t total = product(sizes);
    const std::size_t order = theta.order();
    Samples s;
    s.z.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(theta.modes()));
    s.t.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        s.t[i].resize(order);
        for (std::size_t r = 0; r < order; ++r)
            s.t[i][r] = index_map(i, r, sizes);
    }
    for (std::size_t f = 0; f < theta.modes(); ++f) {
        std::vector<ComplexVector> powers(order);
        for (std::size_t r = 0; r < order; ++r)
            powers[r] = mode_vector(std::exp(Complex{theta[theta.alpha_index(f, r)], theta[theta.omega_index(f, r)]}),
                                    sizes[r]);
        for (std::size_t i = 0; i < total; ++i) {
            Complex v{1.0, 0.0};
            for (std::size_t r = 0; r < order; ++r)
                v *= powers[r][static_cast<Eigen::Index>(s.t[i][r])];
            s.z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = v;
        }
    }
    return s;
}

}  // namespace

ThetaVector::ThetaVector(std::size_t order, std::size_t modes)
    : ThetaVector(order, modes, std::vector<double>(2 * order * modes + 2 * modes, 0.0))
{
}

ThetaVector::ThetaVector(std::size_t order, std::size_t modes, std::vector<double> values)
    : order_(order), modes_(modes), values_(std::move(values))
{
    if (order == 0 || modes == 0)
        throw std::invalid_argument("ThetaVector: order and mode count must be >= 1");
    if (values_.size() != 2 * order * modes + 2 * modes)
        throw std::invalid_argument("ThetaVector: expected " + std::to_string(2 * order * modes + 2 * modes) +
                                    " values, got " + std::to_string(values_.size()));
}

ThetaVector ThetaVector::from_modes(std::span<const RdMode> modes)
{
    if (modes.empty())
        throw std::invalid_argument("ThetaVector::from_modes: no modes");
    const std::size_t order = modes.front().order();
    ThetaVector theta(order, modes.size());
    for (std::size_t f = 0; f < modes.size(); ++f) {
        modes[f].validate(order);
        for (std::size_t r = 0; r < order; ++r) {
            theta[theta.omega_index(f, r)] = kTwoPi * modes[f].freqs[r];
            theta[theta.alpha_index(f, r)] = modes[f].damps[r];
        }
        theta[theta.lambda_index(f)] = std::abs(modes[f].amplitude);
        theta[theta.phi_index(f)] = std::arg(modes[f].amplitude);
    }
    return theta;
}

std::vector<RdMode> ThetaVector::to_modes() const
{
    std::vector<RdMode> out(modes_);
    for (std::size_t f = 0; f < modes_; ++f) {
        for (std::size_t r = 0; r < order_; ++r) {
            double nu = values_[omega_index(f, r)] / kTwoPi;
            nu -= std::floor(nu);
            out[f].freqs.push_back(nu < 1.0 ? nu : 0.0);
            out[f].damps.push_back(values_[alpha_index(f, r)]);
        }
        out[f].amplitude = std::polar(values_[lambda_index(f)], values_[phi_index(f)]);
    }
    return out;
}

void ThetaVector::validate() const
{
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("ThetaVector: non-finite parameter");
    for (std::size_t f = 0; f < modes_; ++f)
        if (!(values_[lambda_index(f)] > 0.0))
            throw std::invalid_argument("ThetaVector: lambda_" + std::to_string(f) + " must be > 0");
}

std::size_t index_map(std::size_t flat, std::size_t dim, std::span<const std::size_t> sizes)
{
    if (dim >= sizes.size())
        throw std::out_of_range("index_map: dimension out of range");
    std::size_t stride = 1;
    for (std::size_t l = dim + 1; l < sizes.size(); ++l)
        stride *= sizes[l];
    return (flat / stride) % sizes[dim];
}

ComplexVector model_mean(const ThetaVector& theta, std::span<const std::size_t> sizes)
{
    require_shape(theta, sizes);
    const Samples s = mode_samples(theta, sizes);
    ComplexVector mu = ComplexVector::Zero(s.z.rows());
    for (std::size_t f = 0; f < theta.modes(); ++f)
        mu += std::polar(theta[theta.lambda_index(f)], theta[theta.phi_index(f)]) *
              s.z.col(static_cast<Eigen::Index>(f));
    return mu;
}

ComplexMatrix jacobian(const ThetaVector& theta, std::span<const std::size_t> sizes)
{
    require_shape(theta, sizes);
    const Samples s = mode_samples(theta, sizes);
    const std::size_t order = theta.order();
    const Eigen::Index rows = s.z.rows();
    ComplexMatrix jac(rows, static_cast<Eigen::Index>(theta.size()));
    const Complex j{0.0, 1.0};

    for (std::size_t f = 0; f < theta.modes(); ++f) {
        const auto fi = static_cast<Eigen::Index>(f);
        const double lambda = theta[theta.lambda_index(f)];
        const Complex phase = std::polar(1.0, theta[theta.phi_index(f)]);
        const Complex c = lambda * phase;
        for (std::size_t r = 0; r < order; ++r) {
            for (Eigen::Index i = 0; i < rows; ++i) {
                const Complex d = static_cast<double>(s.t[static_cast<std::size_t>(i)][r]) * c * s.z(i, fi);
                jac(i, static_cast<Eigen::Index>(theta.omega_index(f, r))) = j * d;
                jac(i, static_cast<Eigen::Index>(theta.alpha_index(f, r))) = d;
            }
        }
        jac.col(static_cast<Eigen::Index>(theta.lambda_index(f))) = phase * s.z.col(fi);
        jac.col(static_cast<Eigen::Index>(theta.phi_index(f))) = j * c * s.z.col(fi);
    }
    return jac;
}

CrlbReport crlb_general(const ThetaVector& theta, double sigma2, std::span<const std::size_t> sizes)
{
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("crlb_general: sigma2 must be positive");
    ComplexMatrix v = jacobian(theta, sizes);

    // V = J S^-1: undo the lambda scaling of the omega, alpha and phi columns.
    const std::size_t order = theta.order();
    for (std::size_t f = 0; f < theta.modes(); ++f) {
        const double lambda = theta[theta.lambda_index(f)];
        for (std::size_t r = 0; r < order; ++r) {
            v.col(static_cast<Eigen::Index>(theta.omega_index(f, r))) /= lambda;
            v.col(static_cast<Eigen::Index>(theta.alpha_index(f, r))) /= lambda;
        }
        v.col(static_cast<Eigen::Index>(theta.phi_index(f))) /= lambda;
    }

    // Re{V^H V} = B^T B with B = [Re V; Im V]. Working on B through its SVD
    // avoids squaring the condition number when forming W = (B^T B)^-1.
    Eigen::MatrixXd b(2 * v.rows(), v.cols());
    b.topRows(v.rows()) = v.real();
    b.bottomRows(v.rows()) = v.imag();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();

    CrlbReport report;
    const double smin = sv[sv.size() - 1];
    report.fisher_cond = smin > 0.0 ? (sv[0] / smin) * (sv[0] / smin) : std::numeric_limits<double>::infinity();
    if (!(report.fisher_cond <= kMaxFisherCond))
        throw EstimationError("crlb_general: Fisher matrix is singular or ill-conditioned (cond = " +
                              std::to_string(report.fisher_cond) + ")");

    const Eigen::MatrixXd scaled = svd.matrixV() * sv.cwiseInverse().asDiagonal();
    const Eigen::VectorXd w_diag = scaled.rowwise().squaredNorm();
    auto w = [&](std::size_t k) { return w_diag[static_cast<Eigen::Index>(k)]; };

    const double half = sigma2 / 2.0;
    report.crlb_omega.resize(theta.modes());
    report.crlb_alpha.resize(theta.modes());
    for (std::size_t f = 0; f < theta.modes(); ++f) {
        const double lambda2 = theta[theta.lambda_index(f)] * theta[theta.lambda_index(f)];
        for (std::size_t r = 0; r < order; ++r) {
            report.crlb_omega[f].push_back(half * w(theta.omega_index(f, r)) / lambda2);
            report.crlb_alpha[f].push_back(half * w(theta.alpha_index(f, r)) / lambda2);
        }
        report.crlb_lambda.push_back(half * w(theta.lambda_index(f)));
        report.crlb_phi.push_back(half * w(theta.phi_index(f)) / lambda2);
    }
    return report;
}

SingleModeBounds crlb_single_mode(std::span<const double> alpha, std::span<const std::size_t> sizes,
                                  double lambda, double sigma2)
{
    if (alpha.size() != sizes.size() || alpha.empty())
        throw std::invalid_argument("crlb_single_mode: alpha and sizes must have the same nonzero length");
    if (!(lambda > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("crlb_single_mode: lambda and sigma2 must be positive");

    const std::size_t order = sizes.size();
    double energy = 1.0;  // M^(alpha)
    std::vector<double> mean(order), var(order);
    for (std::size_t r = 0; r < order; ++r) {
        if (sizes[r] < 2)
            throw std::invalid_argument("crlb_single_mode: every dimension needs at least 2 samples");
        if (!(alpha[r] <= 0.0))
            throw std::invalid_argument("crlb_single_mode: damping must be <= 0");
        energy *= geometric_sum(2.0 * alpha[r], sizes[r]);

        double wsum = 0.0, m1 = 0.0;
        for (std::size_t m = 0; m < sizes[r]; ++m) {
            const double w = std::exp(2.0 * alpha[r] * static_cast<double>(m));
            wsum += w;
            m1 += w * static_cast<double>(m);
        }
        mean[r] = m1 / wsum;
        double m2 = 0.0;
        for (std::size_t m = 0; m < sizes[r]; ++m) {
            const double d = static_cast<double>(m) - mean[r];
            m2 += std::exp(2.0 * alpha[r] * static_cast<double>(m)) * d * d;
        }
        var[r] = m2 / wsum;
    }

    const double base = sigma2 / (2.0 * lambda * lambda * energy);
    SingleModeBounds out;
    double coupling = 1.0;
    for (std::size_t r = 0; r < order; ++r) {
        out.omega.push_back(base / var[r]);
        coupling += mean[r] * mean[r] / var[r];
    }
    out.alpha = out.omega;
    out.phi = base * coupling;
    out.lambda = lambda * lambda * out.phi;
    return out;
}

double crlb_omega_undamped(std::span<const std::size_t> sizes, std::size_t dim, double lambda, double sigma2)
{
    const auto mr = static_cast<double>(sizes[dim]);
    return 6.0 * sigma2 / (lambda * lambda * static_cast<double>(product(sizes)) * (mr * mr - 1.0));
}

double crlb_phi_undamped(std::span<const std::size_t> sizes, double lambda, double sigma2)
{
    double sum = 0.0;
    for (std::size_t m : sizes)
        sum += (static_cast<double>(m) - 1.0) / (static_cast<double>(m) + 1.0);
    return sigma2 / (2.0 * lambda * lambda * static_cast<double>(product(sizes))) * (1.0 + 3.0 * sum);
}

}  // namespace rdmodal
