#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "rdmodal/dictionary.hpp"
#include "rdmodal/tensor.hpp"

namespace rdmodal {

/// How per-column correlations are combined into one selection score.
enum class Aggregation {
    l1,  ///< sum_m |<r_m, q_n>|
    l2,  ///< sqrt(sum_m |<r_m, q_n>|^2)
};

struct SompConfig {
    std::size_t max_iter = 1;  ///< atom budget
    double epsilon = 0.0;      ///< stop once ||R||_F <= epsilon
    Aggregation aggregation = Aggregation::l1;
};

struct SparseSolution {
    std::vector<std::size_t> omega;     ///< selected atoms, in selection order
    ComplexMatrix coeffs;               ///< N x M', zero outside omega
    double residual_norm = 0.0;         ///< ||Y - Q_omega X_omega||_F
    std::vector<double> residual_history;  ///< residual norm before the first and after each selection
};

/// Simultaneous orthogonal matching pursuit over the columns of `y`.
///
/// Each iteration selects the unselected atom with the largest aggregated
/// correlation against the current residual (lowest index on ties), then
/// refits all selected atoms jointly by least squares. An atom that lies in
/// the span of the already selected ones is skipped in favour of the next
/// best. Throws std::invalid_argument on shape mismatches.
SparseSolution somp(const ComplexMatrix& y, const ComplexMatrix& atoms, const SompConfig& cfg);

inline SparseSolution somp(const ComplexMatrix& y, const Dictionary& dict, const SompConfig& cfg)
{
    return somp(y, dict.atoms, cfg);
}

/// |q(mu, 0)^H y|^2 for y = c a(nu1, alpha1) of length M, in closed form.
/// The removable singularity at mu = nu1, alpha1 = 0 evaluates to |c|^2 M.
double freq_objective(double mu, double nu1, double alpha1, double c1_mag, std::size_t length);

/// |q(nu1, beta)^H y|^2 for y = c a(nu1, alpha1), in closed form. Unimodal in
/// beta with its maximum at beta = alpha1.
double damp_objective(double beta, double alpha1, double c1_mag, std::size_t length);

}  // namespace rdmodal
