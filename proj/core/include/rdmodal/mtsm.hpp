#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rdmodal/signal_model.hpp"
#include "rdmodal/stsm.hpp"
#include "rdmodal/tensor.hpp"

namespace rdmodal {

struct MtsmConfig {
    std::size_t f_modes = 1;
    std::size_t k_iters = 2;  ///< improvement sweeps after the initialization
    MultigridConfig stsm;

    void validate() const;
};

/// Working state of one separated component.
struct ComponentState {
    ComplexTensor y_bar;  ///< component plus residual it is fitted to
    ComplexTensor y_hat;  ///< rank-1 modal estimate, rank1(1, {lead, a_2, ..., a_R})
    RdMode mode;          ///< dims 1..R-1 filled in; dim 0 is set by the final extraction
    ComplexVector lead;   ///< least-squares dimension-0 vector c * a_1
};

/// Left singular vectors of the F largest singular values of `y1`.
/// Throws std::invalid_argument if F >= rows, EstimationError when the
/// F-th singular value vanishes. `singular_values`, when non-null, receives
/// the full spectrum.
ComplexMatrix subspace_basis(const ComplexMatrix& y1, std::size_t f_modes,
                             std::vector<double>* singular_values = nullptr);

struct ShiftInvariance {
    ComplexMatrix a1;                  ///< M_1 x F, columns scaled to leading entry 1
    std::vector<Complex> eigenvalues;  ///< pencil eigenvalues, estimates of a_{f,1}
};

/// Dimension-0 mode matrix from an orthonormal signal-subspace basis via the
/// shift-invariance pencil pinv(U without last row) * (U without first row).
/// Throws EstimationError when the eigenvector matrix is (near) singular.
ShiftInvariance estimate_a1(const ComplexMatrix& u_f);

/// Splits y into F components: Ybar_f = a_f o (pinv(A_1) x_0 y)_f.
std::vector<ComplexTensor> separate(const ComplexTensor& y, const ComplexMatrix& a1);

/// STSM on dims 1..R-1 of state.y_bar, least-squares dimension-0 vector, and
/// the rebuilt rank-1 estimate. When `keep_better` is set and the state already
/// carries an estimate, the previous modes refitted to the new y_bar are kept
/// instead if they fit at least as well; returns true in that case.
bool component_update(ComponentState& state, const MultigridConfig& cfg, bool keep_better = false);

struct MtsmDiagnostics {
    std::vector<double> singular_values;     ///< of the dimension-0 unfolding
    std::vector<Complex> pencil_eigenvalues;
    double min_eigen_separation = 0.0;       ///< min |lambda_i - lambda_j| (0 when F == 1)
    std::vector<double> residual_norms;      ///< ||Y - sum_f Yhat_f^(i)|| for i = 0..K
    /// sweep_residuals[i-1][f] = ||R_f^(i)|| for f = 0..F (R_0^(i) = R_F^(i-1)).
    std::vector<std::vector<double>> sweep_residuals;
    std::size_t kept_previous = 0;           ///< updates where the refitted previous estimate won
    std::vector<std::string> warnings;
};

struct MtsmResult {
    std::vector<RdMode> modes;
    MtsmDiagnostics diagnostics;
};

/// Multiple-tone estimation. Requires F < M_1 and every other dimension of
/// size >= 2; modes must be distinct in dimension 0.
MtsmResult mtsm(const ComplexTensor& y, const MtsmConfig& cfg);

}  // namespace rdmodal
