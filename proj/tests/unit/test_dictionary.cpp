#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rdmodal/dictionary.hpp"
#include "rdmodal/signal_model.hpp"
#include "rdmodal/somp.hpp"

using namespace rdmodal;

namespace {

// Normalized undamped single-tone objective |sum_m exp(j 2 pi x m)|^2 / M^2.
double kernel(double x, std::size_t m)
{
    Complex s{};
    for (std::size_t k = 0; k < m; ++k)
        s += std::exp(Complex{0.0, 2.0 * std::numbers::pi * x * static_cast<double>(k)});
    return std::norm(s) / static_cast<double>(m * m);
}

// Capture half-width by dense scanning: first side-lobe height on [1/M, 2/M],
// then the first main-lobe offset dropping to it.
double zeta_by_scan(std::size_t m)
{
    const double md = static_cast<double>(m);
    const int n = 200000;
    double side = 0.0;
    for (int i = 0; i <= n; ++i)
        side = std::max(side, kernel((1.0 + i / double(n)) / md, m));
    for (int i = 0; i <= n; ++i) {
        const double x = i / double(n) / md;
        if (kernel(x, m) <= side)
            return x;
    }
    return 1.0 / md;
}

}  // namespace

TEST(Dictionary, GeometricSum)
{
    for (double x : {0.0, -1e-12, -1e-6, -0.01, -0.3, 0.2})
        for (std::size_t m : {1u, 2u, 7u, 30u}) {
            double direct = 0.0;
            for (std::size_t k = 0; k < m; ++k)
                direct += std::exp(x * static_cast<double>(k));
            EXPECT_NEAR(geometric_sum(x, m), direct, 1e-12 * direct) << x << ' ' << m;
        }
}

TEST(Dictionary, UniformGrids)
{
    const auto f = uniform_freq_grid(4);
    EXPECT_EQ(f.points(), (std::vector<double>{0.0, 0.25, 0.5, 0.75}));
    EXPECT_DOUBLE_EQ(f.max_spacing(), 0.25);
    const auto d = uniform_damp_grid(3, -0.2);
    EXPECT_DOUBLE_EQ(d[0], -0.2);
    EXPECT_DOUBLE_EQ(d[2], 0.0);
    EXPECT_DOUBLE_EQ(d.lower(), -0.2);
    EXPECT_THROW(uniform_freq_grid(1), std::invalid_argument);
    EXPECT_THROW(uniform_damp_grid(3, 0.0), std::invalid_argument);
    EXPECT_THROW(Grid1D::frequency({0.2, 0.1}), std::invalid_argument);
    EXPECT_THROW(Grid1D::frequency({0.2, 1.0}), std::invalid_argument);
    EXPECT_THROW(Grid1D::damping({-0.3, 0.0}, -0.2), std::invalid_argument);
}

TEST(Dictionary, AtomsAreUnitNormModalVectors)
{
    const auto a = modal_atom(0.3, -0.05, 12);
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);
    const auto v = mode_vector(mode_coordinate(0.3, -0.05), 12);
    EXPECT_LT((a - v / v.norm()).norm(), 1e-14);
}

TEST(Dictionary, DampingMajorOrder)
{
    const auto d = build_dictionary(uniform_freq_grid(3), uniform_damp_grid(2, -0.1), 5);
    ASSERT_EQ(d.size(), 6u);
    EXPECT_EQ(d.atoms.cols(), 6);
    EXPECT_DOUBLE_EQ(d.labels[1].freq, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(d.labels[1].damp, -0.1);
    EXPECT_DOUBLE_EQ(d.labels[4].freq, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(d.labels[4].damp, 0.0);
    EXPECT_LT((d.atoms.col(4) - modal_atom(1.0 / 3.0, 0.0, 5)).norm(), 1e-15);
}

TEST(Dictionary, RefinementInsertsEtaPointsPerSide)
{
    const auto g = uniform_freq_grid(4);
    const std::size_t mid[] = {2};
    EXPECT_EQ(dicref(g, mid, 1).points(), (std::vector<double>{0.0, 0.25, 0.375, 0.5, 0.625, 0.75}));

    // Index 0 wraps to the last point.
    const std::size_t first[] = {0};
    const auto w = dicref(g, first, 1);
    EXPECT_EQ(w.size(), 6u);
    EXPECT_DOUBLE_EQ(w[1], 0.125);
    EXPECT_DOUBLE_EQ(w[5], 0.875);

    const auto r = dicref(g, mid, 3);
    EXPECT_EQ(r.size(), 10u);
    EXPECT_NEAR(r.local_spacing(5), 0.25 / 4.0, 1e-15);

    // Damping grid: the active endpoint at 0 has nothing to its right.
    const auto d = uniform_damp_grid(3, -0.2);
    const std::size_t top[] = {2};
    EXPECT_EQ(dicref(d, top, 1).points(), (std::vector<double>{-0.2, -0.1, -0.05, 0.0}));

    // Overlapping refinements merge instead of duplicating points.
    const std::size_t both[] = {1, 2};
    EXPECT_EQ(dicref(g, both, 1).size(), 7u);

    EXPECT_THROW(dicref(g, std::span<const std::size_t>{}, 1), std::invalid_argument);
    const std::size_t bad[] = {4};
    EXPECT_THROW(dicref(g, bad, 1), std::out_of_range);
}

TEST(Dictionary, ZetaMatchesDenseScan)
{
    for (std::size_t m : {3u, 5u, 8u, 10u, 16u, 32u}) {
        const double z = compute_zeta(m);
        EXPECT_GT(z, 0.0);
        EXPECT_LT(z, 1.0 / static_cast<double>(m));
        EXPECT_NEAR(z, zeta_by_scan(m), 2e-5 / static_cast<double>(m)) << m;
    }
    EXPECT_THROW(compute_zeta(2), std::invalid_argument);
    EXPECT_DOUBLE_EQ(capture_half_width(2), 0.5);
}

TEST(Dictionary, FrequencyObjectiveClosedForm)
{
    const std::size_t m = 9;
    const Complex c{0.6, -0.8};
    const ComplexVector y = c * mode_vector(mode_coordinate(0.31, -0.04), m);
    for (double mu : {0.0, 0.2, 0.31, 0.5, 0.77})
        EXPECT_NEAR(freq_objective(mu, 0.31, -0.04, std::abs(c), m),
                    std::norm(modal_atom(mu, 0.0, m).dot(y)), 1e-12);
    EXPECT_NEAR(freq_objective(0.31, 0.31, 0.0, 1.0, m), 9.0, 1e-12);
}

TEST(Dictionary, DampingObjectivePeaksAtTrueDamping)
{
    const std::size_t m = 10;
    const double alpha = -0.23;
    const ComplexVector y = 2.0 * mode_vector(mode_coordinate(0.4, alpha), m);
    double best_beta = 0.0, best = -1.0;
    for (int i = 0; i <= 20000; ++i) {
        const double beta = -1.0 + i * 1e-4;
        const double v = damp_objective(beta, alpha, 2.0, m);
        EXPECT_NEAR(v, std::norm(modal_atom(0.4, beta, m).dot(y)), 1e-10);
        if (v > best) {
            best = v;
            best_beta = beta;
        }
    }
    EXPECT_NEAR(best_beta, alpha, 1e-4);
}
