#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rdmodal/errors.hpp"
#include "rdmodal/mtsm.hpp"
#include "rdmodal/presets.hpp"
#include "test_util.hpp"

using namespace rdmodal;

namespace {

ComplexTensor component(const RdMode& m, const std::vector<std::size_t>& sizes)
{
    std::vector<ComplexVector> v;
    for (std::size_t r = 0; r < sizes.size(); ++r)
        v.push_back(mode_vector(m.coordinate(r), sizes[r]));
    return rank1(m.amplitude, v);
}

ComplexTensor noisy(const SignalSpec& s, double snr_db, std::uint64_t seed)
{
    const auto clean = synthesize(s);
    return add_noise(clean, {sigma_for_snr(clean, snr_db), seed});
}

}  // namespace

TEST(Mtsm, SubspaceBasis)
{
    const auto spec = preset("signal2");
    const ComplexMatrix y1 = unfold(synthesize(spec), 0);
    const ComplexMatrix u = subspace_basis(y1, 2);
    EXPECT_LT((ComplexMatrix::Identity(2, 2) - u.adjoint() * u).norm(), 1e-12);
    EXPECT_LT((y1 - u * (u.adjoint() * y1)).norm(), 1e-10 * y1.norm());

    SignalSpec one = spec;
    one.modes.pop_back();
    const ComplexMatrix r1 = unfold(synthesize(one), 0);
    EXPECT_LT((r1 - subspace_basis(r1, 1) * (subspace_basis(r1, 1).adjoint() * r1)).norm(), 1e-12 * r1.norm());

    EXPECT_THROW(subspace_basis(y1, 8), std::invalid_argument);
    EXPECT_THROW(subspace_basis(r1, 2), EstimationError);
}

TEST(Mtsm, SignalSubspaceGapAt20dB)
{
    const auto spec = preset("signal2");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::vector<double> sv;
        subspace_basis(unfold(noisy(spec, 20.0, seed), 0), 2, &sv);
        EXPECT_LT(sv[2] / sv[1], 0.5);
    }
}

TEST(Mtsm, ShiftInvarianceRecoversModeVectors)
{
    const auto spec = preset("signal2");
    const ComplexMatrix u = subspace_basis(unfold(synthesize(spec), 0), 2);
    const auto si = estimate_a1(u);
    ASSERT_EQ(si.a1.cols(), 2);
    // Column order is arbitrary: match each truth vector to its closest column.
    for (const auto& m : spec.modes) {
        const ComplexVector truth = mode_vector(m.coordinate(0), 8);
        double best = 1e9;
        for (Eigen::Index k = 0; k < 2; ++k)
            best = std::min(best, (si.a1.col(k) - truth).norm() / truth.norm());
        EXPECT_LT(best, 1e-8);
    }
    for (const auto& lam : si.eigenvalues) {
        const double d = std::min(std::abs(lam - spec.modes[0].coordinate(0)), std::abs(lam - spec.modes[1].coordinate(0)));
        EXPECT_LT(d, 1e-10);
    }

    // F = 1: dominant singular vector with constant ratio of consecutive entries.
    SignalSpec one = spec;
    one.modes.pop_back();
    const auto s1 = estimate_a1(subspace_basis(unfold(synthesize(one), 0), 1));
    EXPECT_EQ(s1.a1(0, 0), Complex(1.0, 0.0));
    for (Eigen::Index i = 1; i < 8; ++i)
        EXPECT_LT(std::abs(s1.a1(i, 0) / s1.a1(i - 1, 0) - one.modes[0].coordinate(0)), 1e-10);
}

TEST(Mtsm, RepeatedLeadingModeIsRejected)
{
    SignalSpec s = preset("signal2");
    s.modes[1].freqs[0] = s.modes[0].freqs[0];
    s.modes[1].damps[0] = s.modes[0].damps[0];
    // Rank collapses in the dimension-0 unfolding.
    MtsmConfig cfg;
    cfg.f_modes = 2;
    EXPECT_THROW(mtsm(synthesize(s), cfg), EstimationError);
}

TEST(Mtsm, SeparationIsExactWithoutNoise)
{
    const auto spec = preset("signal2");
    const auto y = synthesize(spec);
    const auto si = estimate_a1(subspace_basis(unfold(y, 0), 2));
    const auto parts = separate(y, si.a1);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_LT(frob_norm(parts[0] + parts[1] - y), 1e-10 * frob_norm(y));
    for (const auto& m : spec.modes) {
        const auto truth = component(m, spec.sizes);
        const double d = std::min(frob_norm(parts[0] - truth), frob_norm(parts[1] - truth));
        EXPECT_LT(d, 1e-8 * frob_norm(truth));
    }
    EXPECT_THROW(separate(y, ComplexMatrix::Ones(8, 2)), EstimationError);
    EXPECT_THROW(separate(y, ComplexMatrix::Ones(7, 2)), std::invalid_argument);
}

TEST(Mtsm, ComponentUpdateLeastSquares)
{
    // Target exactly rank-1 with dims 1..2 on the initial grids: exact fit.
    MultigridConfig cfg;
    const auto damp = uniform_damp_grid(cfg.n_damp0, cfg.beta_min);
    RdMode m;
    m.freqs = {0.123, 0.2, 0.62};
    m.damps = {-0.03, damp[3], damp[9]};
    m.amplitude = {0.8, 0.4};
    const std::vector<std::size_t> sizes{6, 5, 7};
    ComponentState st;
    st.y_bar = component(m, sizes);
    EXPECT_FALSE(component_update(st, cfg));
    EXPECT_LT(frob_norm(st.y_bar - st.y_hat), 1e-12 * frob_norm(st.y_bar));
    const ComplexVector lead = m.amplitude * mode_vector(m.coordinate(0), 6);
    EXPECT_LT((st.lead - lead).norm(), 1e-10 * lead.norm());
    EXPECT_DOUBLE_EQ(st.mode.freqs[1], 0.2);
    EXPECT_DOUBLE_EQ(st.mode.damps[2], damp[9]);

    // Perturbed target: the fit is no worse than the perturbation plus a grid term.
    auto pert = test::random_tensor(sizes, 77);
    pert *= Complex{1e-3 * frob_norm(st.y_bar) / frob_norm(pert), 0.0};
    ComponentState p;
    p.y_bar = st.y_bar + pert;
    component_update(p, cfg);
    EXPECT_LE(frob_norm(p.y_bar - p.y_hat), frob_norm(pert) * (1.0 + 1e-9));

    // With keep_better, an update never fits worse than the refitted previous estimate.
    ComponentState q = p;
    q.y_bar = p.y_bar + pert;
    const double before = frob_norm(q.y_bar - q.y_hat);
    component_update(q, cfg, true);
    EXPECT_LE(frob_norm(q.y_bar - q.y_hat), before * (1.0 + 1e-12));
}

TEST(Mtsm, NoiselessSignal2)
{
    const auto spec = preset("signal2");
    MtsmConfig cfg;
    cfg.f_modes = 2;
    cfg.stsm.beta_min = -0.2;
    const auto res = mtsm(synthesize(spec), cfg);
    ASSERT_EQ(res.modes.size(), 2u);
    const auto match = match_modes(spec.modes, res.modes);
    const double df = (1.0 / 50.0) / 22.0 / 22.0;
    const double da = (0.2 / 9.0) / 12.0 / 12.0;
    for (std::size_t f = 0; f < 2; ++f) {
        const auto& est = res.modes[match[f]];
        ASSERT_EQ(est.order(), 3u);
        for (std::size_t r = 0; r < 3; ++r) {
            EXPECT_LE(std::abs(wrapped_freq_diff(est.freqs[r], spec.modes[f].freqs[r])), df);
            EXPECT_LE(std::abs(est.damps[r] - spec.modes[f].damps[r]), da);
        }
        EXPECT_NEAR(std::abs(est.amplitude), 1.0, 1e-2);
    }
    EXPECT_EQ(count_pairing_errors(spec, res.modes), 0u);
}

TEST(Mtsm, SingleModeMatchesStsm)
{
    // Noiseless: the separation is then the identity. With noise the
    // dimension-0 projection and the keep-better safeguard may differ.
    MtsmConfig cfg;
    Rng rng(77);
    for (int draw = 0; draw < 10; ++draw) {
        SignalSpec spec;
        spec.sizes = {9, 7, 5};
        RdMode m;
        for (std::size_t r = 0; r < 3; ++r) {
            m.freqs.push_back(rng.uniform());
            m.damps.push_back(rng.uniform(-0.04, 0.0));
        }
        m.amplitude = std::polar(rng.uniform(0.5, 2.0), rng.uniform(-3.0, 3.0));
        spec.modes = {m};
        const auto y = synthesize(spec);
        const auto a = mtsm(y, cfg).modes.front();
        const auto b = stsm_mode(y, cfg.stsm);
        for (std::size_t r = 0; r < 3; ++r) {
            EXPECT_DOUBLE_EQ(a.freqs[r], b.freqs[r]);
            EXPECT_DOUBLE_EQ(a.damps[r], b.damps[r]);
        }
        EXPECT_LT(std::abs(a.amplitude - b.amplitude), 1e-10 * std::abs(b.amplitude));
    }
}

TEST(Mtsm, ResidualNeverIncreases)
{
    const auto spec = preset("signal3");
    MtsmConfig cfg;
    cfg.f_modes = 3;
    cfg.k_iters = 3;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto res = mtsm(noisy(spec, 10.0, seed), cfg);
        const auto& d = res.diagnostics;
        ASSERT_EQ(d.residual_norms.size(), 4u);
        for (std::size_t i = 1; i < d.residual_norms.size(); ++i)
            EXPECT_LE(d.residual_norms[i], d.residual_norms[i - 1] * (1.0 + 1e-12));
        for (const auto& chain : d.sweep_residuals)
            for (std::size_t f = 1; f < chain.size(); ++f)
                EXPECT_LE(chain[f], chain[f - 1] * (1.0 + 1e-12));
    }
}

TEST(Mtsm, Signal3PairsAutomatically)
{
    const auto spec = preset("signal3");
    MtsmConfig cfg;
    cfg.f_modes = 3;
    const auto res = mtsm(synthesize(spec), cfg);
    EXPECT_EQ(count_pairing_errors(spec, res.modes), 0u);
    const auto match = match_modes(spec.modes, res.modes);
    for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t r = 1; r < 3; ++r)
            EXPECT_NEAR(res.modes[match[f]].freqs[r], spec.modes[f].freqs[r], 1e-4);
}

TEST(Mtsm, Preconditions)
{
    const auto y = synthesize(preset("signal5"));
    MtsmConfig cfg;
    cfg.f_modes = 10;
    EXPECT_THROW(mtsm(y, cfg), std::invalid_argument);
    cfg.f_modes = 0;
    EXPECT_THROW(mtsm(y, cfg), std::invalid_argument);
    SignalSpec s = preset("signal1");
    s.sizes = {10, 1};
    cfg.f_modes = 1;
    EXPECT_THROW(mtsm(synthesize(s), cfg), std::invalid_argument);
}

TEST(Mtsm, OneDimensionalSignalSupportsOneMode)
{
    SignalSpec s;
    s.sizes = {20};
    RdMode a, b;
    a.freqs = {0.1};
    a.damps = {-0.01};
    b.freqs = {0.6};
    b.damps = {-0.02};
    s.modes = {a};
    MtsmConfig cfg;
    const auto res = mtsm(synthesize(s), cfg);
    EXPECT_NEAR(res.modes[0].freqs[0], 0.1, 1e-4);

    // A single column cannot carry a rank-2 subspace.
    s.modes = {a, b};
    cfg.f_modes = 2;
    EXPECT_THROW(mtsm(synthesize(s), cfg), std::invalid_argument);
}
