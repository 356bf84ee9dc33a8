#include "rdmodal/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rdmodal/crlb.hpp"
#include "rdmodal/mtsm.hpp"
#include "rdmodal/presets.hpp"
#include "rdmodal/stsm.hpp"

namespace rdmodal {

namespace {

constexpr std::uint64_t kNoiseStream = 0;
constexpr std::uint64_t kGridStream = 1;
constexpr std::uint64_t kScalingStream = 2;

double pairwise_sum(const double* v, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v)
{
    return pairwise_sum(v.data(), v.size());
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<RdMode> estimate(const ComplexTensor& y, Estimator which, const MultigridConfig& mg,
                             const ExperimentConfig* exp, std::vector<double>* residuals)
{
    if (which == Estimator::stsm)
        return {stsm_mode(y, mg)};
    MtsmConfig m;
    if (exp)
        m = exp->mtsm_config();
    m.stsm = mg;
    auto res = mtsm(y, m);
    if (residuals)
        *residuals = std::move(res.diagnostics.residual_norms);
    return std::move(res.modes);
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out.flush())
        throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

Grid1D perturbed_freq_grid(std::size_t n, double fraction, Rng& rng)
{
    if (n < 2)
        throw std::invalid_argument("perturbed_freq_grid: n must be >= 2");
    if (!(fraction >= 0.0 && fraction < 0.5))
        throw std::invalid_argument("perturbed_freq_grid: fraction must lie in [0, 0.5)");
    const double step = 1.0 / static_cast<double>(n);
    std::vector<double> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
        double p = static_cast<double>(k) * step + rng.uniform(-fraction, fraction) * step;
        p -= std::floor(p);
        pts[k] = p < 1.0 ? p : 0.0;
    }
    std::sort(pts.begin(), pts.end());
    return Grid1D::frequency(std::move(pts));
}

CrlbTotals crlb_totals(const SignalSpec& spec, double sigma2)
{
    if (sigma2 == 0.0)
        return {};
    const auto report = crlb_general(ThetaVector::from_modes(spec.modes), sigma2, spec.sizes);
    const double two_pi = 2.0 * std::numbers::pi;
    double freq = 0.0, damp = 0.0;
    for (std::size_t f = 0; f < spec.modes.size(); ++f)
        for (std::size_t r = 0; r < spec.order(); ++r) {
            freq += report.crlb_omega[f][r] / (two_pi * two_pi);
            damp += report.crlb_alpha[f][r];
        }
    const double rf = static_cast<double>(spec.modes.size() * spec.order());
    return {std::sqrt(freq / rf), std::sqrt(damp / rf)};
}

TrialOutcome run_trial(const ExperimentConfig& cfg, double snr_db, std::size_t trial)
{
    const ComplexTensor clean = synthesize(cfg.signal);
    const double sigma2 = std::isinf(snr_db) ? 0.0 : sigma_for_snr(clean, snr_db);
    ComplexTensor y = add_noise(clean, {sigma2, derive_seed(cfg.master_seed, kNoiseStream, trial)});

    MultigridConfig mg = cfg.multigrid;
    if (cfg.perturb_grid) {
        Rng rng(derive_seed(cfg.master_seed, kGridStream, trial));
        mg.freq_grid0 = perturbed_freq_grid(mg.n_freq0, cfg.perturb_fraction, rng);
    }
    const auto& perm = cfg.dim_permutation;
    if (!perm.empty())
        y = permute_dims(y, perm);

    TrialOutcome out;
    const auto start = Clock::now();
    try {
        out.estimates = estimate(y, cfg.estimator, mg, &cfg, &out.residual_norms);
    } catch (const std::exception& e) {
        out.runtime_ms = elapsed_ms(start);
        out.failed = true;
        out.error = e.what();
        return out;
    }
    out.runtime_ms = elapsed_ms(start);

    if (!perm.empty()) {
        for (auto& m : out.estimates) {
            RdMode orig = m;
            for (std::size_t k = 0; k < perm.size(); ++k) {
                orig.freqs[perm[k]] = m.freqs[k];
                orig.damps[perm[k]] = m.damps[k];
            }
            m = std::move(orig);
        }
    }
    out.squared = trial_squared_errors(cfg.signal, out.estimates);
    out.pairing_errors = count_pairing_errors(cfg.signal, out.estimates);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const std::size_t n_snr = cfg.snr_db.size();
    const std::size_t n_tasks = n_snr * cfg.trials;

    ExperimentResult result;
    result.outcomes.assign(n_snr, std::vector<TrialOutcome>(cfg.trials));

    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n_tasks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= n_tasks)
                return;
            const std::size_t s = task / cfg.trials;
            const std::size_t t = task % cfg.trials;
            try {
                result.outcomes[s][t] = run_trial(cfg, cfg.snr_db[s], t);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next = n_tasks;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    const ComplexTensor clean = synthesize(cfg.signal);
    const double rf = static_cast<double>(cfg.signal.modes.size() * cfg.signal.order());
    for (std::size_t s = 0; s < n_snr; ++s) {
        ResultRow row;
        row.snr_db = cfg.snr_db[s];
        row.trials = cfg.trials;
        std::vector<double> freq, damp, runtime;
        for (const auto& o : result.outcomes[s]) {
            runtime.push_back(o.runtime_ms);
            if (o.failed) {
                ++row.failures;
                continue;
            }
            freq.push_back(o.squared.freq);
            damp.push_back(o.squared.damp);
            row.pairing_errors += o.pairing_errors;
        }
        const double ok = static_cast<double>(freq.size());
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.rmse_freq_total = freq.empty() ? nan : std::sqrt(pairwise_sum(freq) / ok / rf);
        row.rmse_damp_total = damp.empty() ? nan : std::sqrt(pairwise_sum(damp) / ok / rf);
        row.mean_runtime_ms = pairwise_sum(runtime) / static_cast<double>(runtime.size());
        const double sigma2 = std::isinf(row.snr_db) ? 0.0 : sigma_for_snr(clean, row.snr_db);
        const auto bound = crlb_totals(cfg.signal, sigma2);
        row.sqrt_crlb_freq_total = bound.freq;
        row.sqrt_crlb_damp_total = bound.damp;
        result.rows.push_back(row);
    }
    return result;
}

std::string results_csv(const std::vector<ResultRow>& rows)
{
    std::string out = "# schema: rdmodal-results/1\n"
                      "snr_db,rmse_freq_total,rmse_damp_total,sqrt_crlb_freq_total,sqrt_crlb_damp_total,"
                      "trials,failures,pairing_errors\n";
    for (const auto& r : rows)
        out += fmt(r.snr_db) + ',' + fmt(r.rmse_freq_total) + ',' + fmt(r.rmse_damp_total) + ',' +
               fmt(r.sqrt_crlb_freq_total) + ',' + fmt(r.sqrt_crlb_damp_total) + ',' + std::to_string(r.trials) +
               ',' + std::to_string(r.failures) + ',' + std::to_string(r.pairing_errors) + '\n';
    return out;
}

std::string timing_csv(const std::vector<ResultRow>& rows)
{
    std::string out = "# schema: rdmodal-timing/1\nsnr_db,mean_runtime_ms\n";
    for (const auto& r : rows)
        out += fmt(r.snr_db) + ',' + fmt(r.mean_runtime_ms) + '\n';
    return out;
}

std::string curves_dat(const std::vector<ResultRow>& rows)
{
    struct Curve {
        const char* name;
        double ResultRow::*field;
    };
    const Curve curves[] = {
        {"rmse_freq_total", &ResultRow::rmse_freq_total},
        {"sqrt_crlb_freq_total", &ResultRow::sqrt_crlb_freq_total},
        {"rmse_damp_total", &ResultRow::rmse_damp_total},
        {"sqrt_crlb_damp_total", &ResultRow::sqrt_crlb_damp_total},
    };
    std::string out;
    for (std::size_t c = 0; c < std::size(curves); ++c) {
        if (c)
            out += "\n\n";
        out += std::string("# curve: ") + curves[c].name + "\n# snr_db value\n";
        for (const auto& r : rows)
            out += fmt(r.snr_db) + ' ' + fmt(r.*curves[c].field) + '\n';
    }
    return out;
}

std::string meta_text(const ExperimentConfig& cfg)
{
    std::ostringstream os;
    os << "# rdmodal experiment, resolved configuration\n"
       << "# signal: " << describe(cfg.signal) << '\n'
       << "# snr: mean per-sample signal power over noise variance\n"
       << "# grid perturbation: each initial frequency point moved by uniform(-f, f) / n_freq0, f = perturb_fraction\n"
       << "# seeds: noise derive_seed(seed, 0, trial), grid derive_seed(seed, 1, trial)\n"
       << format_config(cfg);
    return os.str();
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result)
{
    write_file(cfg.output + "_results.csv", results_csv(result.rows));
    write_file(cfg.output + "_timing.csv", timing_csv(result.rows));
    write_file(cfg.output + "_meta.txt", meta_text(cfg));
    write_file(cfg.output + "_curves.dat", curves_dat(result.rows));
}

std::vector<ScalingRow> run_scaling(const ScalingConfig& cfg)
{
    if (cfg.leading_sizes.empty() || cfg.repeats == 0)
        throw std::invalid_argument("run_scaling: need sizes and repeats >= 1");
    if (!std::is_sorted(cfg.leading_sizes.begin(), cfg.leading_sizes.end()) ||
        std::adjacent_find(cfg.leading_sizes.begin(), cfg.leading_sizes.end()) != cfg.leading_sizes.end())
        throw std::invalid_argument("run_scaling: sizes must be strictly increasing");

    std::vector<ScalingRow> rows;
    for (std::size_t m1 : cfg.leading_sizes) {
        SignalSpec spec = preset(cfg.estimator == Estimator::mtsm ? "signal2" : "signal1");
        spec.sizes = cfg.estimator == Estimator::mtsm ? std::vector<std::size_t>{m1, 4, 4}
                                                      : std::vector<std::size_t>{m1, 10};
        ExperimentConfig exp;
        exp.signal = spec;
        exp.k_iters = 2;
        const ComplexTensor clean = synthesize(spec);
        const double sigma2 = sigma_for_snr(clean, cfg.snr_db);

        const auto noisy = [&](std::size_t rep) {
            return add_noise(clean, {sigma2, derive_seed(cfg.master_seed, kScalingStream, m1 * 1000003 + rep)});
        };
        estimate(noisy(cfg.repeats), cfg.estimator, cfg.multigrid, &exp, nullptr);  // warm-up

        std::vector<double> times;
        for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
            const ComplexTensor y = noisy(rep);
            const auto start = Clock::now();
            estimate(y, cfg.estimator, cfg.multigrid, &exp, nullptr);
            times.push_back(elapsed_ms(start));
        }
        ScalingRow row;
        row.m1 = m1;
        row.mean_ms = pairwise_sum(times) / static_cast<double>(times.size());
        double ss = 0.0;
        for (double t : times)
            ss += (t - row.mean_ms) * (t - row.mean_ms);
        row.std_ms = times.size() > 1 ? std::sqrt(ss / static_cast<double>(times.size() - 1)) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows)
{
    std::string out = "# schema: rdmodal-scaling/1\nM1,mean_ms,std_ms\n";
    for (const auto& r : rows)
        out += std::to_string(r.m1) + ',' + fmt(r.mean_ms) + ',' + fmt(r.std_ms) + '\n';
    return out;
}

double fit_exponent(const std::vector<ScalingRow>& rows)
{
    if (rows.size() < 2)
        throw std::invalid_argument("fit_exponent: need at least two sizes");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        const double x = std::log(static_cast<double>(r.m1));
        const double y = std::log(r.mean_ms);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace rdmodal
