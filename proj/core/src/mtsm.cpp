#include "rdmodal/mtsm.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rdmodal/errors.hpp"

namespace rdmodal {

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kEigenvectorCondLimit = 1e10;

// Vector multiplying the dimension-0 unfolding of a rank-1 tensor built from
// `factors` (dims 1..R-1): kron(a_{R-1}, ..., a_1), dimension 1 fastest.
ComplexVector trailing_kron(const std::vector<ComplexVector>& factors)
{
    ComplexVector w = ComplexVector::Ones(1);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
        w = kron(w, *it);
    return w;
}

struct Fit {
    ComplexVector lead;
    ComplexTensor y_hat;
    double residual = 0.0;
};

Fit fit_lead(const ComplexTensor& y_bar, const std::vector<ComplexVector>& trailing)
{
    Fit fit;
    const ComplexVector w = trailing_kron(trailing);
    fit.lead = unfold(y_bar, 0) * w.conjugate() / w.squaredNorm();
    std::vector<ComplexVector> all;
    all.reserve(trailing.size() + 1);
    all.push_back(fit.lead);
    all.insert(all.end(), trailing.begin(), trailing.end());
    fit.y_hat = rank1(Complex{1.0, 0.0}, all);
    fit.residual = frob_norm(y_bar - fit.y_hat);
    return fit;
}

std::vector<ComplexVector> trailing_factors(const RdMode& mode, const std::vector<std::size_t>& sizes)
{
    std::vector<ComplexVector> out;
    for (std::size_t r = 1; r < sizes.size(); ++r)
        out.push_back(mode_vector(mode.coordinate(r), sizes[r]));
    return out;
}

}  // namespace

void MtsmConfig::validate() const
{
    if (f_modes == 0)
        throw std::invalid_argument("mtsm: f_modes must be >= 1");
    stsm.validate();
}

ComplexMatrix subspace_basis(const ComplexMatrix& y1, std::size_t f_modes, std::vector<double>* singular_values)
{
    if (f_modes == 0 || f_modes >= static_cast<std::size_t>(y1.rows()))
        throw std::invalid_argument("subspace_basis: need 1 <= F < M_1 (F = " + std::to_string(f_modes) +
                                    ", M_1 = " + std::to_string(y1.rows()) + ")");
    if (f_modes > static_cast<std::size_t>(y1.cols()))
        throw std::invalid_argument("subspace_basis: F exceeds the number of columns");

    Eigen::JacobiSVD<ComplexMatrix> svd(y1, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (singular_values)
        singular_values->assign(sv.data(), sv.data() + sv.size());
    const auto f = static_cast<Eigen::Index>(f_modes);
    if (!(sv[0] > 0.0) || sv[f - 1] <= kRankTolerance * sv[0])
        throw EstimationError("subspace_basis: signal subspace has rank below F");
    return svd.matrixU().leftCols(f);
}

ShiftInvariance estimate_a1(const ComplexMatrix& u_f)
{
    const Eigen::Index m = u_f.rows();
    const Eigen::Index f = u_f.cols();
    if (m < 2 || f < 1 || f >= m)
        throw std::invalid_argument("estimate_a1: need 1 <= F < M_1");

    const ComplexMatrix top = u_f.topRows(m - 1);
    const ComplexMatrix bottom = u_f.bottomRows(m - 1);
    const ComplexMatrix pencil = top.completeOrthogonalDecomposition().solve(bottom);

    Eigen::ComplexEigenSolver<ComplexMatrix> eig(pencil);
    if (eig.info() != Eigen::Success)
        throw EstimationError("estimate_a1: eigendecomposition failed");
    const ComplexMatrix t = eig.eigenvectors();
    Eigen::JacobiSVD<ComplexMatrix> tsvd(t);
    const Eigen::VectorXd& tsv = tsvd.singularValues();
    if (!(tsv[f - 1] > tsv[0] / kEigenvectorCondLimit))
        throw EstimationError("estimate_a1: defective shift-invariance pencil (repeated dimension-0 modes?)");

    ShiftInvariance out;
    out.a1 = u_f * t;
    for (Eigen::Index k = 0; k < f; ++k) {
        const Complex lead = out.a1(0, k);
        if (std::abs(lead) <= kRankTolerance * out.a1.col(k).norm())
            throw EstimationError("estimate_a1: mode vector with vanishing first entry");
        out.a1.col(k) /= lead;
        out.eigenvalues.push_back(eig.eigenvalues()[k]);
    }
    return out;
}

std::vector<ComplexTensor> separate(const ComplexTensor& y, const ComplexMatrix& a1)
{
    if (y.order() == 0 || static_cast<std::size_t>(a1.rows()) != y.size(0))
        throw std::invalid_argument("separate: A_1 row count must equal M_1");
    const auto cod = a1.completeOrthogonalDecomposition();
    if (cod.rank() < a1.cols())
        throw EstimationError("separate: A_1 is rank deficient");
    const ComplexMatrix pinv = cod.pseudoInverse();

    std::vector<ComplexTensor> out;
    out.reserve(static_cast<std::size_t>(a1.cols()));
    for (Eigen::Index f = 0; f < a1.cols(); ++f)
        out.push_back(contract_mode(y, 0, a1.col(f) * pinv.row(f)));
    return out;
}

bool component_update(ComponentState& state, const MultigridConfig& cfg, bool keep_better)
{
    const ComplexTensor& y_bar = state.y_bar;
    const std::size_t order = y_bar.order();
    if (order == 0)
        throw std::invalid_argument("component_update: empty target");

    RdMode mode;
    mode.freqs.assign(order, 0.0);
    mode.damps.assign(order, 0.0);
    if (order > 1) {
        std::vector<std::size_t> dims(order - 1);
        std::iota(dims.begin(), dims.end(), std::size_t{1});
        for (const auto& e : stsm(y_bar, cfg, dims)) {
            mode.freqs[e.dim] = e.freq;
            mode.damps[e.dim] = e.damp;
        }
    }
    Fit fit = fit_lead(y_bar, trailing_factors(mode, y_bar.sizes()));

    bool kept = false;
    if (keep_better && state.y_hat.numel() == y_bar.numel() && state.mode.order() == order) {
        Fit previous = fit_lead(y_bar, trailing_factors(state.mode, y_bar.sizes()));
        if (previous.residual <= fit.residual) {
            fit = std::move(previous);
            mode = state.mode;
            kept = true;
        }
    }
    mode.amplitude = fit.lead[0];
    state.mode = std::move(mode);
    state.lead = std::move(fit.lead);
    state.y_hat = std::move(fit.y_hat);
    return kept;
}

MtsmResult mtsm(const ComplexTensor& y, const MtsmConfig& cfg)
{
    cfg.validate();
    if (y.order() == 0)
        throw std::invalid_argument("mtsm: empty tensor");
    if (cfg.f_modes >= y.size(0))
        throw std::invalid_argument("mtsm: F must be smaller than M_1");
    for (std::size_t r = 1; r < y.order(); ++r)
        if (y.size(r) < 2)
            throw std::invalid_argument("mtsm: dimensions after the first need at least 2 samples");

    MtsmResult result;
    MtsmDiagnostics& diag = result.diagnostics;
    const std::size_t n_modes = cfg.f_modes;

    const ComplexMatrix u = subspace_basis(unfold(y, 0), n_modes, &diag.singular_values);
    const ShiftInvariance si = estimate_a1(u);
    diag.pencil_eigenvalues = si.eigenvalues;
    diag.min_eigen_separation = n_modes > 1 ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t i = 0; i < n_modes; ++i)
        for (std::size_t j = i + 1; j < n_modes; ++j)
            diag.min_eigen_separation =
                std::min(diag.min_eigen_separation, std::abs(si.eigenvalues[i] - si.eigenvalues[j]));
    if (n_modes > 1 && diag.min_eigen_separation < 1.0 / static_cast<double>(y.size(0)))
        diag.warnings.push_back("dimension-0 modes nearly coincide; consider permuting dimensions");

    std::vector<ComponentState> states(n_modes);
    const auto parts = separate(y, si.a1);
    ComplexTensor residual = y;
    for (std::size_t f = 0; f < n_modes; ++f) {
        states[f].y_bar = parts[f];
        component_update(states[f], cfg.stsm);
        residual -= states[f].y_hat;
    }
    diag.residual_norms.push_back(frob_norm(residual));

    for (std::size_t sweep = 0; sweep < cfg.k_iters; ++sweep) {
        std::vector<double> chain{frob_norm(residual)};
        for (auto& state : states) {
            state.y_bar = state.y_hat + residual;
            if (component_update(state, cfg.stsm, true))
                ++diag.kept_previous;
            residual = state.y_bar - state.y_hat;
            chain.push_back(frob_norm(residual));
        }
        diag.sweep_residuals.push_back(std::move(chain));

        ComplexTensor total = y;
        for (const auto& state : states)
            total -= state.y_hat;
        diag.residual_norms.push_back(frob_norm(total));
    }

    const std::size_t dim0[] = {0};
    for (auto& state : states) {
        const ComplexTensor target = state.y_hat + residual;
        const auto est = stsm(target, cfg.stsm, dim0).front();
        if (est.flags & kCoarseInitialGrid)
            diag.warnings.push_back("initial frequency grid coarser than the capture zone in dimension 0");
        RdMode mode = state.mode;
        mode.freqs[0] = est.freq;
        mode.damps[0] = est.damp;

        std::vector<ComplexVector> factors;
        for (std::size_t r = 0; r < y.order(); ++r)
            factors.push_back(mode_vector(mode.coordinate(r), y.size(r)));
        const ComplexTensor model = rank1(Complex{1.0, 0.0}, factors);
        Complex num{};
        double den = 0.0;
        for (std::size_t i = 0; i < target.numel(); ++i) {
            num += std::conj(model[i]) * target[i];
            den += std::norm(model[i]);
        }
        mode.amplitude = num / den;
        result.modes.push_back(std::move(mode));
    }
    std::sort(diag.warnings.begin(), diag.warnings.end());
    diag.warnings.erase(std::unique(diag.warnings.begin(), diag.warnings.end()), diag.warnings.end());
    return result;
}

}  // namespace rdmodal
