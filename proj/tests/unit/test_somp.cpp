#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "rdmodal/dictionary.hpp"
#include "rdmodal/rng.hpp"
#include "rdmodal/somp.hpp"
#include "test_util.hpp"

using namespace rdmodal;

namespace {

double projection_residual(const ComplexMatrix& y, const ComplexMatrix& atoms, const std::vector<std::size_t>& support)
{
    ComplexMatrix sub(atoms.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k)
        sub.col(static_cast<Eigen::Index>(k)) = atoms.col(static_cast<Eigen::Index>(support[k]));
    const ComplexMatrix x = sub.colPivHouseholderQr().solve(y);
    return (y - sub * x).norm();
}

// Support of size k minimizing the least-squares residual, by enumeration.
std::vector<std::size_t> exhaustive_support(const ComplexMatrix& y, const ComplexMatrix& atoms, std::size_t k)
{
    const auto n = static_cast<std::size_t>(atoms.cols());
    std::vector<char> mask(n, 0);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(k), 1);
    std::vector<std::size_t> best;
    double best_res = std::numeric_limits<double>::infinity();
    do {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask[i])
                s.push_back(i);
        const double r = projection_residual(y, atoms, s);
        if (r < best_res) {
            best_res = r;
            best = s;
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return best;
}

}  // namespace

TEST(Somp, MatchesExhaustiveSearchOnInDictionaryMixtures)
{
    Rng rng(314);
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = static_cast<std::size_t>(6 + trial % 7);
        const double offset = rng.uniform(0.0, 1.0 / static_cast<double>(n));
        std::vector<double> pts;
        for (std::size_t k = 0; k < n; ++k)
            pts.push_back(offset + static_cast<double>(k) / static_cast<double>(n));
        const auto dict = harmonic_dictionary(Grid1D::frequency(pts), 16);

        const std::size_t k = 1 + trial % 2;
        std::set<std::size_t> truth;
        while (truth.size() < k)
            truth.insert(static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
        ComplexMatrix y = ComplexMatrix::Zero(16, 4);
        for (std::size_t idx : truth)
            for (int c = 0; c < 4; ++c)
                y.col(c) += rng.complex_normal(1.0) * dict.atoms.col(static_cast<Eigen::Index>(idx));

        SompConfig cfg;
        cfg.max_iter = k;
        auto sol = somp(y, dict, cfg);
        std::sort(sol.omega.begin(), sol.omega.end());
        EXPECT_EQ(sol.omega, exhaustive_support(y, dict.atoms, k));
        EXPECT_EQ(sol.omega, std::vector<std::size_t>(truth.begin(), truth.end()));
        EXPECT_LT(sol.residual_norm, 1e-10 * y.norm());
    }
}

TEST(Somp, ResidualHistoryIsNonIncreasing)
{
    const auto y = test::random_matrix(10, 3, 8);
    const auto dict = build_dictionary(uniform_freq_grid(20), uniform_damp_grid(3, -0.2), 10);
    SompConfig cfg;
    cfg.max_iter = 6;
    const auto sol = somp(y, dict, cfg);
    ASSERT_EQ(sol.residual_history.size(), 7u);
    EXPECT_DOUBLE_EQ(sol.residual_history.front(), y.norm());
    for (std::size_t i = 1; i < sol.residual_history.size(); ++i)
        EXPECT_LE(sol.residual_history[i], sol.residual_history[i - 1] * (1.0 + 1e-14));
    EXPECT_DOUBLE_EQ(sol.residual_norm, sol.residual_history.back());

    // Coefficients reproduce the residual and vanish outside the support.
    const ComplexMatrix recon = dict.atoms * sol.coeffs;
    EXPECT_NEAR((y - recon).norm(), sol.residual_norm, 1e-12);
    for (Eigen::Index n = 0; n < sol.coeffs.rows(); ++n)
        if (std::find(sol.omega.begin(), sol.omega.end(), static_cast<std::size_t>(n)) == sol.omega.end())
            EXPECT_EQ(sol.coeffs.row(n).norm(), 0.0);
}

TEST(Somp, EpsilonStopsEarly)
{
    const auto dict = harmonic_dictionary(uniform_freq_grid(8), 8);
    const ComplexMatrix y = dict.atoms.col(3) * 2.0;
    SompConfig cfg;
    cfg.max_iter = 5;
    cfg.epsilon = 1e-9;
    const auto sol = somp(y, dict, cfg);
    EXPECT_EQ(sol.omega, (std::vector<std::size_t>{3}));
}

TEST(Somp, SkipsDependentAtomsAndBreaksTiesByIndex)
{
    ComplexMatrix atoms(4, 3);
    atoms.col(0) = modal_atom(0.0, 0.0, 4);
    atoms.col(1) = atoms.col(0);
    atoms.col(2) = modal_atom(0.25, 0.0, 4);
    const ComplexMatrix y = atoms.col(0) + 0.5 * atoms.col(2);
    SompConfig cfg;
    cfg.max_iter = 3;
    const auto sol = somp(y, atoms, cfg);
    EXPECT_EQ(sol.omega, (std::vector<std::size_t>{0, 2}));
}

TEST(Somp, AggregationsAgreeForSingleColumn)
{
    const auto y = test::random_matrix(12, 1, 4);
    const auto dict = harmonic_dictionary(uniform_freq_grid(30), 12);
    SompConfig a, b;
    a.max_iter = b.max_iter = 3;
    b.aggregation = Aggregation::l2;
    EXPECT_EQ(somp(y, dict, a).omega, somp(y, dict, b).omega);
}

TEST(Somp, RejectsBadInput)
{
    const auto dict = harmonic_dictionary(uniform_freq_grid(8), 8);
    EXPECT_THROW(somp(ComplexMatrix::Zero(7, 2), dict, {}), std::invalid_argument);
    SompConfig cfg;
    cfg.max_iter = 0;
    EXPECT_THROW(somp(ComplexMatrix::Zero(8, 2), dict, cfg), std::invalid_argument);
    // Zero data: nothing to select.
    EXPECT_TRUE(somp(ComplexMatrix::Zero(8, 2), dict, {}).omega.empty());
}
