#include "rdmodal/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rdmodal/signal_model.hpp"

namespace rdmodal {

namespace {

constexpr double kMergeTolerance = 1e-14;

double wrap_unit(double x)
{
    x -= std::floor(x);
    if (x >= 1.0)
        x = 0.0;
    return x;
}

// Undamped single-tone objective |q(mu,0)^H y|^2 for |c| = 1 at offset x = nu - mu.
double fejer(double x, std::size_t length)
{
    const double m = static_cast<double>(length);
    const double s = std::sin(std::numbers::pi * x);
    if (std::abs(s) < 1e-12)
        return m;
    const double ratio = std::sin(std::numbers::pi * x * m) / s;
    return ratio * ratio / m;
}

}  // namespace

Grid1D::Grid1D(std::vector<double> points, GridKind kind, double lower, double upper)
    : points_(std::move(points)), kind_(kind), lower_(lower), upper_(upper)
{
    if (points_.empty())
        throw std::invalid_argument("grid must not be empty");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i] > points_[i - 1]))
            throw std::invalid_argument("grid points must be strictly increasing");
    if (kind_ == GridKind::frequency) {
        if (points_.front() < 0.0 || points_.back() >= 1.0)
            throw std::invalid_argument("frequency grid points must lie in [0, 1)");
    } else if (points_.front() < lower_ || points_.back() > 0.0) {
        throw std::invalid_argument("damping grid points must lie in [beta_min, 0]");
    }
}

Grid1D Grid1D::frequency(std::vector<double> points)
{
    return Grid1D(std::move(points), GridKind::frequency, 0.0, 1.0);
}

Grid1D Grid1D::damping(std::vector<double> points, double beta_min)
{
    if (!(beta_min < 0.0))
        throw std::invalid_argument("beta_min must be negative");
    return Grid1D(std::move(points), GridKind::damping, beta_min, 0.0);
}

double Grid1D::max_spacing() const
{
    double gap = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i)
        gap = std::max(gap, points_[i] - points_[i - 1]);
    if (kind_ == GridKind::frequency)
        gap = std::max(gap, points_.front() + 1.0 - points_.back());
    return gap;
}

double Grid1D::local_spacing(std::size_t i) const
{
    const std::size_t n = points_.size();
    if (i >= n)
        throw std::out_of_range("grid index out of range");
    double left = 0.0;
    double right = 0.0;
    if (i > 0)
        left = points_[i] - points_[i - 1];
    else if (kind_ == GridKind::frequency)
        left = points_[0] + 1.0 - points_[n - 1];
    else
        left = points_[0] - lower_;
    if (i + 1 < n)
        right = points_[i + 1] - points_[i];
    else if (kind_ == GridKind::frequency)
        right = points_[0] + 1.0 - points_[n - 1];
    else
        right = upper_ - points_[i];
    return std::max(left, right);
}

Grid1D uniform_freq_grid(std::size_t n)
{
    if (n < 2)
        throw std::invalid_argument("frequency grid needs at least 2 points");
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = static_cast<double>(i) / static_cast<double>(n);
    return Grid1D::frequency(std::move(pts));
}

Grid1D uniform_damp_grid(std::size_t n, double beta_min)
{
    if (n < 2)
        throw std::invalid_argument("damping grid needs at least 2 points");
    if (!(beta_min < 0.0))
        throw std::invalid_argument("beta_min must be negative");
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = beta_min * static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
    return Grid1D::damping(std::move(pts), beta_min);
}

double geometric_sum(double x, std::size_t length)
{
    if (std::abs(x) < 1e-300)
        return static_cast<double>(length);
    return std::expm1(x * static_cast<double>(length)) / std::expm1(x);
}

ComplexVector modal_atom(double freq, double damp, std::size_t length)
{
    ComplexVector v = mode_vector(mode_coordinate(freq, damp), length);
    v /= std::sqrt(geometric_sum(2.0 * damp, length));
    return v;
}

Dictionary build_dictionary(const Grid1D& freqs, const Grid1D& damps, std::size_t length)
{
    if (freqs.kind() != GridKind::frequency || damps.kind() != GridKind::damping)
        throw std::invalid_argument("build_dictionary expects a frequency grid and a damping grid");
    if (length == 0)
        throw std::invalid_argument("atom length must be positive");
    Dictionary d;
    const auto n = static_cast<Eigen::Index>(freqs.size() * damps.size());
    d.atoms.resize(static_cast<Eigen::Index>(length), n);
    d.labels.reserve(static_cast<std::size_t>(n));
    Eigen::Index col = 0;
    for (double beta : damps.points()) {
        for (double mu : freqs.points()) {
            d.atoms.col(col++) = modal_atom(mu, beta, length);
            d.labels.push_back({mu, beta});
        }
    }
    return d;
}

Dictionary harmonic_dictionary(const Grid1D& freqs, std::size_t length)
{
    if (freqs.kind() != GridKind::frequency)
        throw std::invalid_argument("harmonic_dictionary expects a frequency grid");
    Dictionary d;
    d.atoms.resize(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(freqs.size()));
    d.labels.reserve(freqs.size());
    const double scale = 1.0 / std::sqrt(static_cast<double>(length));
    for (std::size_t n = 0; n < freqs.size(); ++n) {
        d.atoms.col(static_cast<Eigen::Index>(n)) = scale * mode_vector(mode_coordinate(freqs[n], 0.0), length);
        d.labels.push_back({freqs[n], 0.0});
    }
    return d;
}

Dictionary damping_dictionary(double freq, const Grid1D& damps, std::size_t length)
{
    return build_dictionary(Grid1D::frequency({wrap_unit(freq)}), damps, length);
}

Grid1D dicref(const Grid1D& grid, std::span<const std::size_t> active, std::size_t eta)
{
    if (active.empty())
        throw std::invalid_argument("dicref needs at least one active atom");
    if (eta == 0)
        throw std::invalid_argument("dicref needs eta >= 1");
    const auto& pts = grid.points();
    const std::size_t n = pts.size();
    const bool circular = grid.kind() == GridKind::frequency;

    std::vector<double> out = pts;
    auto insert_between = [&](double a, double b) {
        for (std::size_t k = 1; k <= eta; ++k) {
            double p = a + (b - a) * static_cast<double>(k) / static_cast<double>(eta + 1);
            out.push_back(circular ? wrap_unit(p) : p);
        }
    };

    for (std::size_t idx : active) {
        if (idx >= n)
            throw std::out_of_range("dicref: active index out of range");
        const double here = pts[idx];
        double left;
        double right;
        if (idx > 0)
            left = pts[idx - 1];
        else
            left = circular ? pts[n - 1] - 1.0 : grid.lower();
        if (idx + 1 < n)
            right = pts[idx + 1];
        else
            right = circular ? pts[0] + 1.0 : grid.upper();
        if (here - left > kMergeTolerance)
            insert_between(left, here);
        if (right - here > kMergeTolerance)
            insert_between(here, right);
    }

    std::sort(out.begin(), out.end());
    std::vector<double> merged;
    merged.reserve(out.size());
    for (double p : out)
        if (merged.empty() || p - merged.back() > kMergeTolerance)
            merged.push_back(p);
    if (circular && merged.size() > 1 && merged.front() + 1.0 - merged.back() <= kMergeTolerance)
        merged.pop_back();

    if (circular)
        return Grid1D::frequency(std::move(merged));
    return Grid1D::damping(std::move(merged), grid.lower());
}

double compute_zeta(std::size_t length)
{
    if (length < 3)
        throw std::invalid_argument("compute_zeta requires length >= 3");
    const double m = static_cast<double>(length);

    // First side lobe peak on [1/M, 2/M]; the kernel is unimodal there.
    double a = 1.0 / m;
    double b = 2.0 / m;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    while (b - a > 1e-15) {
        if (fejer(c, length) > fejer(d, length))
            b = d;
        else
            a = c;
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    const double side_lobe = fejer(0.5 * (a + b), length);

    // Main lobe is decreasing on (0, 1/M).
    double lo = 0.0;
    double hi = 1.0 / m;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (fejer(mid, length) > side_lobe)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double capture_half_width(std::size_t length)
{
    return length < 3 ? 0.5 : compute_zeta(length);
}

}  // namespace rdmodal
