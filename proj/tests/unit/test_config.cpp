#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "rdmodal/config.hpp"
#include "rdmodal/presets.hpp"

using namespace rdmodal;

TEST(Config, SnrRanges)
{
    EXPECT_EQ(parse_snr_range("5:30:5"), (std::vector<double>{5, 10, 15, 20, 25, 30}));
    EXPECT_EQ(parse_snr_range("0:1:0.5"), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(parse_snr_range("10, 20"), (std::vector<double>{10, 20}));
    EXPECT_EQ(parse_snr_range("7"), (std::vector<double>{7}));
    EXPECT_TRUE(std::isinf(parse_snr_range("inf").front()));
    EXPECT_THROW(parse_snr_range("1:2"), std::invalid_argument);
    EXPECT_THROW(parse_snr_range("5:1:1"), std::invalid_argument);
    EXPECT_THROW(parse_snr_range("x"), std::invalid_argument);
}

TEST(Config, DefaultsAreValid)
{
    ExperimentConfig cfg;
    EXPECT_EQ(cfg.signal_name, "signal1");
    EXPECT_EQ(cfg.trials, 200u);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, ParsesFileAndComments)
{
    std::istringstream in(R"(# experiment
signal = signal2   # preset
estimator = mtsm
snr = 10:30:10
trials = 100
seed = 9
beta_min = -0.2
levels = 3
k_iters = 1
perturb_grid = false
dim_permutation = 1,0,2
out = /tmp/x
)");
    const auto cfg = parse_config(in);
    EXPECT_EQ(cfg.signal_name, "signal2");
    EXPECT_EQ(cfg.signal.modes.size(), 2u);
    EXPECT_EQ(cfg.estimator, Estimator::mtsm);
    EXPECT_EQ(cfg.snr_db, (std::vector<double>{10, 20, 30}));
    EXPECT_EQ(cfg.trials, 100u);
    EXPECT_EQ(cfg.master_seed, 9u);
    EXPECT_DOUBLE_EQ(cfg.multigrid.beta_min, -0.2);
    EXPECT_EQ(cfg.multigrid.levels, 3u);
    EXPECT_EQ(cfg.k_iters, 1u);
    EXPECT_FALSE(cfg.perturb_grid);
    EXPECT_EQ(cfg.dim_permutation, (std::vector<std::size_t>{1, 0, 2}));
    EXPECT_EQ(cfg.output, "/tmp/x");
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.mtsm_config().f_modes, 2u);
}

TEST(Config, CustomSignalRoundTrip)
{
    std::istringstream in("sizes = 6,5\nmode = 0.1,-0.01,0.2,-0.02,1,0.5\nmode = 0.4,0,0.7,-0.1,-1,0\nestimator = mtsm\n");
    const auto cfg = parse_config(in);
    EXPECT_EQ(cfg.signal_name, "custom");
    ASSERT_EQ(cfg.signal.modes.size(), 2u);
    EXPECT_EQ(cfg.signal.modes[0].amplitude, Complex(1.0, 0.5));
    EXPECT_DOUBLE_EQ(cfg.signal.modes[1].damps[1], -0.1);

    std::istringstream again(format_config(cfg));
    const auto back = parse_config(again);
    EXPECT_EQ(format_config(back), format_config(cfg));
    EXPECT_EQ(back.signal.sizes, cfg.signal.sizes);
    EXPECT_EQ(back.signal.modes[1].freqs, cfg.signal.modes[1].freqs);

    // Preset configurations round-trip too.
    ExperimentConfig p;
    apply_setting(p, "signal", "signal4");
    std::istringstream pin(format_config(p));
    EXPECT_EQ(format_config(parse_config(pin)), format_config(p));
}

TEST(Config, Errors)
{
    ExperimentConfig cfg;
    EXPECT_THROW(apply_setting(cfg, "bogus", "1"), std::invalid_argument);
    EXPECT_THROW(apply_setting(cfg, "trials", "-3"), std::invalid_argument);
    EXPECT_THROW(apply_setting(cfg, "signal", "signal9"), std::invalid_argument);
    EXPECT_THROW(apply_setting(cfg, "mode", "0.1,0.2,0.3"), std::invalid_argument);
    EXPECT_THROW(apply_setting(cfg, "perturb_grid", "maybe"), std::invalid_argument);
    std::istringstream noeq("trials 5\n");
    EXPECT_THROW(parse_config(noeq), std::invalid_argument);

    ExperimentConfig multi;
    apply_setting(multi, "signal", "signal3");
    EXPECT_THROW(multi.validate(), std::invalid_argument);  // stsm on three modes
    multi.estimator = Estimator::mtsm;
    EXPECT_NO_THROW(multi.validate());
    multi.dim_permutation = {0, 0, 1};
    EXPECT_THROW(multi.validate(), std::invalid_argument);
    multi.dim_permutation = {};
    multi.trials = 0;
    EXPECT_THROW(multi.validate(), std::invalid_argument);
}
