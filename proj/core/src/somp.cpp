#include "rdmodal/somp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rdmodal {

namespace {

constexpr double kDependentAtomTolerance = 1e-10;

Eigen::VectorXd selection_scores(const ComplexMatrix& corr, Aggregation agg)
{
    if (agg == Aggregation::l1)
        return corr.cwiseAbs().rowwise().sum();
    return corr.rowwise().norm();
}

}  // namespace

SparseSolution somp(const ComplexMatrix& y, const ComplexMatrix& atoms, const SompConfig& cfg)
{
    if (atoms.rows() != y.rows())
        throw std::invalid_argument("somp: dictionary atoms have " + std::to_string(atoms.rows()) +
                                    " rows, data has " + std::to_string(y.rows()));
    if (cfg.max_iter == 0)
        throw std::invalid_argument("somp: max_iter must be >= 1");
    if (!(cfg.epsilon >= 0.0))
        throw std::invalid_argument("somp: epsilon must be >= 0");

    const Eigen::Index n_atoms = atoms.cols();
    SparseSolution sol;
    sol.coeffs = ComplexMatrix::Zero(n_atoms, y.cols());

    ComplexMatrix residual = y;
    sol.residual_norm = residual.norm();
    sol.residual_history.push_back(sol.residual_norm);

    // Orthonormal basis of the selected atoms and the triangular factor
    // Q_omega = basis * tri.
    ComplexMatrix basis(y.rows(), 0);
    std::vector<char> excluded(static_cast<std::size_t>(n_atoms), 0);
    ComplexMatrix x_omega;

    while (sol.omega.size() < cfg.max_iter && sol.residual_norm > cfg.epsilon) {
        const Eigen::VectorXd scores = selection_scores(atoms.adjoint() * residual, cfg.aggregation);

        Eigen::Index chosen = -1;
        ComplexVector direction;
        for (;;) {
            Eigen::Index best = -1;
            for (Eigen::Index n = 0; n < n_atoms; ++n)
                if (!excluded[static_cast<std::size_t>(n)] && (best < 0 || scores[n] > scores[best]))
                    best = n;
            if (best < 0)
                break;
            ComplexVector w = atoms.col(best);
            for (int pass = 0; pass < 2; ++pass)
                w -= basis * (basis.adjoint() * w);
            excluded[static_cast<std::size_t>(best)] = 1;
            const double norm = w.norm();
            if (norm > kDependentAtomTolerance * atoms.col(best).norm()) {
                chosen = best;
                direction = w / norm;
                break;
            }
        }
        if (chosen < 0)
            break;

        sol.omega.push_back(static_cast<std::size_t>(chosen));
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = direction;

        ComplexMatrix selected(y.rows(), static_cast<Eigen::Index>(sol.omega.size()));
        for (std::size_t k = 0; k < sol.omega.size(); ++k)
            selected.col(static_cast<Eigen::Index>(k)) = atoms.col(static_cast<Eigen::Index>(sol.omega[k]));
        const ComplexMatrix tri = basis.adjoint() * selected;
        x_omega = tri.triangularView<Eigen::Upper>().solve(basis.adjoint() * y);
        residual = y - selected * x_omega;
        sol.residual_norm = residual.norm();
        sol.residual_history.push_back(sol.residual_norm);
    }

    for (std::size_t k = 0; k < sol.omega.size(); ++k)
        sol.coeffs.row(static_cast<Eigen::Index>(sol.omega[k])) = x_omega.row(static_cast<Eigen::Index>(k));
    return sol;
}

double freq_objective(double mu, double nu1, double alpha1, double c1_mag, std::size_t length)
{
    const Complex z = std::exp(Complex{alpha1, 2.0 * std::numbers::pi * (nu1 - mu)});
    Complex sum;
    if (std::abs(1.0 - z) < 1e-6) {
        Complex p{1.0, 0.0};
        for (std::size_t m = 0; m < length; ++m) {
            sum += p;
            p *= z;
        }
    } else {
        sum = (1.0 - std::pow(z, static_cast<double>(length))) / (1.0 - z);
    }
    return c1_mag * c1_mag / static_cast<double>(length) * std::norm(sum);
}

double damp_objective(double beta, double alpha1, double c1_mag, std::size_t length)
{
    const double cross = geometric_sum(alpha1 + beta, length);
    return c1_mag * c1_mag * cross * cross / geometric_sum(2.0 * beta, length);
}

}  // namespace rdmodal
