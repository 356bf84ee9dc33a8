#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "rdmodal/assignment.hpp"
#include "rdmodal/rng.hpp"

using namespace rdmodal;

namespace {

double cost_of(const Eigen::MatrixXd& c, const std::vector<std::size_t>& col)
{
    double s = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i)
        s += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col[i]));
    return s;
}

}  // namespace

TEST(Assignment, MatchesExhaustiveSearch)
{
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 6;
        Eigen::MatrixXd c(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                c(i, j) = rng.uniform(0.0, 10.0);

        std::vector<std::size_t> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        double best = std::numeric_limits<double>::infinity();
        do
            best = std::min(best, cost_of(c, perm));
        while (std::next_permutation(perm.begin(), perm.end()));

        const auto got = solve_assignment(c);
        ASSERT_EQ(got.size(), static_cast<std::size_t>(n));
        EXPECT_EQ(std::set<std::size_t>(got.begin(), got.end()).size(), got.size());
        EXPECT_NEAR(cost_of(c, got), best, 1e-9);
    }
}

TEST(Assignment, IdentityAndAntiDiagonal)
{
    Eigen::MatrixXd c = Eigen::MatrixXd::Ones(3, 3);
    c.diagonal().setZero();
    EXPECT_EQ(solve_assignment(c), (std::vector<std::size_t>{0, 1, 2}));
    Eigen::MatrixXd d = Eigen::MatrixXd::Ones(3, 3);
    d(0, 2) = d(1, 1) = d(2, 0) = 0.0;
    EXPECT_EQ(solve_assignment(d), (std::vector<std::size_t>{2, 1, 0}));
}

TEST(Assignment, RejectsNonSquare)
{
    EXPECT_THROW(solve_assignment(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}
