// Command line front end: Monte-Carlo experiments, timing runs, bound tables.

#include <cstdio>
#include <exception>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rdmodal/config.hpp"
#include "rdmodal/crlb.hpp"
#include "rdmodal/harness.hpp"
#include "rdmodal/presets.hpp"

namespace {

struct RunOptions {
    std::string config;
    std::optional<std::string> signal, snr, estimator, out;
    std::optional<std::size_t> trials, threads;
    std::optional<std::uint64_t> seed;
};

rdmodal::ExperimentConfig resolve(const RunOptions& o)
{
    rdmodal::ExperimentConfig cfg;
    if (!o.config.empty())
        cfg = rdmodal::load_config(o.config, cfg);
    if (o.signal)
        rdmodal::apply_setting(cfg, "signal", *o.signal);
    if (o.snr)
        rdmodal::apply_setting(cfg, "snr", *o.snr);
    if (o.estimator)
        rdmodal::apply_setting(cfg, "estimator", *o.estimator);
    if (o.out)
        cfg.output = *o.out;
    if (o.trials)
        cfg.trials = *o.trials;
    if (o.threads)
        cfg.threads = *o.threads;
    if (o.seed)
        cfg.master_seed = *o.seed;
    return cfg;
}

int cmd_run(const RunOptions& o)
{
    const auto cfg = resolve(o);
    const auto result = rdmodal::run_experiment(cfg);
    rdmodal::write_outputs(cfg, result);
    std::printf("%8s %14s %14s %14s %14s %9s\n", "snr_db", "rmse_freq", "sqrt_crlb_freq", "rmse_damp",
                "sqrt_crlb_damp", "failures");
    for (const auto& r : result.rows)
        std::printf("%8.2f %14.6e %14.6e %14.6e %14.6e %5zu/%-3zu\n", r.snr_db, r.rmse_freq_total,
                    r.sqrt_crlb_freq_total, r.rmse_damp_total, r.sqrt_crlb_damp_total, r.failures, r.trials);
    std::printf("wrote %s_results.csv, %s_timing.csv, %s_meta.txt, %s_curves.dat\n", cfg.output.c_str(),
                cfg.output.c_str(), cfg.output.c_str(), cfg.output.c_str());
    return 0;
}

int cmd_crlb(const std::string& signal, const std::string& snr)
{
    const auto spec = rdmodal::preset(signal);
    const auto clean = rdmodal::synthesize(spec);
    const auto theta = rdmodal::ThetaVector::from_modes(spec.modes);
    const double two_pi = 2.0 * std::numbers::pi;
    std::printf("%s (%s), bounds as standard deviations; frequency in cycles/sample\n", signal.c_str(),
                rdmodal::describe(spec).c_str());
    for (double s : rdmodal::parse_snr_range(snr)) {
        const double sigma2 = rdmodal::sigma_for_snr(clean, s);
        const auto rep = rdmodal::crlb_general(theta, sigma2, spec.sizes);
        const auto total = rdmodal::crlb_totals(spec, sigma2);
        std::printf("snr %.2f dB  sigma2 %.6e  cond %.3e  total freq %.6e  total damp %.6e\n", s, sigma2,
                    rep.fisher_cond, total.freq, total.damp);
        for (std::size_t f = 0; f < spec.modes.size(); ++f) {
            std::printf("  mode %zu:", f);
            for (std::size_t r = 0; r < spec.order(); ++r)
                std::printf("  nu%zu %.4e alpha%zu %.4e", r, std::sqrt(rep.crlb_omega[f][r]) / two_pi, r,
                            std::sqrt(rep.crlb_alpha[f][r]));
            std::printf("  lambda %.4e phi %.4e\n", std::sqrt(rep.crlb_lambda[f]), std::sqrt(rep.crlb_phi[f]));
        }
    }
    return 0;
}

int cmd_scaling(const rdmodal::ScalingConfig& cfg, const std::string& out)
{
    const auto rows = rdmodal::run_scaling(cfg);
    const auto csv = rdmodal::scaling_csv(rows);
    std::fputs(csv.c_str(), stdout);
    std::printf("fit exponent: %.3f\n", rdmodal::fit_exponent(rows));
    if (!out.empty()) {
        std::FILE* f = std::fopen((out + "_scaling.csv").c_str(), "wb");
        if (!f || std::fputs(csv.c_str(), f) < 0) {
            if (f)
                std::fclose(f);
            throw std::runtime_error("cannot write " + out + "_scaling.csv");
        }
        std::fclose(f);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse multigrid estimation of multidimensional modal signals"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Monte-Carlo RMSE experiment against the CRLB");
    run_cmd->add_option("--config", run.config, "key = value configuration file")->check(CLI::ExistingFile);
    run_cmd->add_option("--signal", run.signal, "preset name (signal1..signal5)");
    run_cmd->add_option("--snr", run.snr, "SNR points in dB, a:b:step or a,b,c");
    run_cmd->add_option("--trials", run.trials, "Monte-Carlo trials per SNR point");
    run_cmd->add_option("--seed", run.seed, "master seed");
    run_cmd->add_option("--estimator", run.estimator, "stsm or mtsm");
    run_cmd->add_option("--out", run.out, "output path prefix");
    run_cmd->add_option("--threads", run.threads, "worker threads (0: all cores)");

    rdmodal::ScalingConfig scaling;
    std::string scaling_estimator = "mtsm", scaling_out;
    auto* scaling_cmd = app.add_subcommand("scaling", "Runtime against the leading dimension size");
    scaling_cmd->add_option("--estimator", scaling_estimator, "stsm or mtsm");
    scaling_cmd->add_option("--sizes", scaling.leading_sizes, "leading dimension sizes")->delimiter(',');
    scaling_cmd->add_option("--repeats", scaling.repeats, "timed runs per size");
    scaling_cmd->add_option("--seed", scaling.master_seed, "master seed");
    scaling_cmd->add_option("--out", scaling_out, "write <prefix>_scaling.csv");

    std::string crlb_signal = "signal1", crlb_snr = "5:30:5";
    auto* crlb_cmd = app.add_subcommand("crlb", "Print Cramer-Rao bounds for a preset");
    crlb_cmd->add_option("--signal", crlb_signal, "preset name");
    crlb_cmd->add_option("--snr", crlb_snr, "SNR points in dB");

    auto* presets_cmd = app.add_subcommand("presets", "List preset signals");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd)
            return cmd_run(run);
        if (*scaling_cmd) {
            scaling.estimator = rdmodal::parse_estimator(scaling_estimator);
            return cmd_scaling(scaling, scaling_out);
        }
        if (*crlb_cmd)
            return cmd_crlb(crlb_signal, crlb_snr);
        if (*presets_cmd) {
            for (const auto& name : rdmodal::preset_names())
                std::printf("%-8s %s\n", name.c_str(), rdmodal::describe(rdmodal::preset(name)).c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rdmodal: %s\n", e.what());
        return 1;
    }
    return 0;
}
