#include "rdmodal/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rdmodal/presets.hpp"

namespace rdmodal {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    for (;;) {
        const auto pos = s.find(sep);
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos)
            return out;
        s.remove_prefix(pos + 1);
    }
}

double to_double(std::string_view key, std::string_view text)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw std::invalid_argument(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

std::uint64_t to_uint(std::string_view key, std::string_view text)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument(std::string(key) + ": expected a non-negative integer, got '" +
                                    std::string(text) + "'");
    return v;
}

bool to_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off")
        return false;
    throw std::invalid_argument(std::string(key) + ": expected true/false, got '" + std::string(text) + "'");
}

std::vector<std::size_t> to_size_list(std::string_view key, std::string_view text)
{
    std::vector<std::size_t> out;
    if (trim(text).empty())
        return out;
    for (auto item : split(text, ','))
        out.push_back(static_cast<std::size_t>(to_uint(key, item)));
    return out;
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ',';
        if constexpr (std::is_floating_point_v<T>)
            os << num(v[i]);
        else
            os << v[i];
    }
    return os.str();
}

}  // namespace

std::string_view to_string(Estimator e) noexcept
{
    return e == Estimator::stsm ? "stsm" : "mtsm";
}

Estimator parse_estimator(std::string_view text)
{
    if (text == "stsm")
        return Estimator::stsm;
    if (text == "mtsm")
        return Estimator::mtsm;
    throw std::invalid_argument("estimator must be stsm or mtsm, got '" + std::string(text) + "'");
}

ExperimentConfig::ExperimentConfig() : signal(preset("signal1")) {}

void ExperimentConfig::validate() const
{
    signal.validate();
    if (snr_db.empty())
        throw std::invalid_argument("no SNR points");
    for (double s : snr_db)
        if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
            throw std::invalid_argument("SNR values must be finite or +inf (noiseless)");
    if (trials == 0)
        throw std::invalid_argument("trials must be >= 1");
    multigrid.validate();
    if (!(perturb_fraction >= 0.0 && perturb_fraction < 0.5))
        throw std::invalid_argument("perturb_fraction must lie in [0, 0.5)");
    if (!dim_permutation.empty()) {
        if (dim_permutation.size() != signal.order())
            throw std::invalid_argument("dim_permutation length must equal the signal order");
        inverse_permutation(dim_permutation);
    }
    if (estimator == Estimator::stsm && signal.modes.size() != 1)
        throw std::invalid_argument("the stsm estimator handles single-mode signals only; use mtsm");
    if (estimator == Estimator::mtsm) {
        const std::size_t lead = dim_permutation.empty() ? 0 : dim_permutation[0];
        if (signal.modes.size() >= signal.sizes[lead])
            throw std::invalid_argument("mtsm needs fewer modes than samples in the leading dimension");
    }
}

MtsmConfig ExperimentConfig::mtsm_config() const
{
    MtsmConfig m;
    m.f_modes = signal.modes.size();
    m.k_iters = k_iters;
    m.stsm = multigrid;
    return m;
}

std::vector<double> parse_snr_range(std::string_view text)
{
    text = trim(text);
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw std::invalid_argument("snr range must be a:b:step");
        const double a = to_double("snr", parts[0]);
        const double b = to_double("snr", parts[1]);
        const double step = to_double("snr", parts[2]);
        if (!(step > 0.0) || b < a)
            throw std::invalid_argument("snr range needs step > 0 and b >= a");
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        for (std::size_t k = 0; k < n; ++k)
            out.push_back(a + static_cast<double>(k) * step);
        return out;
    }
    for (auto item : split(text, ','))
        out.push_back(item == "inf" ? std::numeric_limits<double>::infinity() : to_double("snr", item));
    return out;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value)
{
    value = trim(value);
    if (key == "signal") {
        cfg.signal = preset(value);
        cfg.signal_name = std::string(value);
    } else if (key == "sizes") {
        cfg.signal.sizes = to_size_list(key, value);
        cfg.signal_name = "custom";
    } else if (key == "mode") {
        // nu_1, alpha_1, ..., nu_R, alpha_R, re(c), im(c)
        const auto items = split(value, ',');
        if (items.size() < 4 || items.size() % 2 != 0)
            throw std::invalid_argument("mode: expected nu,alpha pairs followed by re,im");
        RdMode m;
        for (std::size_t i = 0; i + 2 < items.size(); i += 2) {
            m.freqs.push_back(to_double(key, items[i]));
            m.damps.push_back(to_double(key, items[i + 1]));
        }
        m.amplitude = {to_double(key, items[items.size() - 2]), to_double(key, items.back())};
        cfg.signal.modes.push_back(std::move(m));
        cfg.signal_name = "custom";
    } else if (key == "snr") {
        cfg.snr_db = parse_snr_range(value);
    } else if (key == "trials") {
        cfg.trials = static_cast<std::size_t>(to_uint(key, value));
    } else if (key == "seed") {
        cfg.master_seed = to_uint(key, value);
    } else if (key == "estimator") {
        cfg.estimator = parse_estimator(value);
    } else if (key == "n_freq0") {
        cfg.multigrid.n_freq0 = static_cast<std::size_t>(to_uint(key, value));
    } else if (key == "n_damp0") {
        cfg.multigrid.n_damp0 = static_cast<std::size_t>(to_uint(key, value));
    } else if (key == "beta_min") {
        cfg.multigrid.beta_min = to_double(key, value);
    } else if (key == "eta_nu") {
        cfg.multigrid.eta_nu = static_cast<std::size_t>(to_uint(key, value));
    } else if (key == "eta_alpha") {
        cfg.multigrid.eta_alpha = static_cast<std::size_t>(to_uint(key, value));
    } else if (key == "levels") {
        cfg.multigrid.levels = static_cast<std::size_t>(to_uint(key, value));
    } else if (key == "freq_tol") {
        cfg.multigrid.freq_tol = to_double(key, value);
    } else if (key == "damp_tol") {
        cfg.multigrid.damp_tol = to_double(key, value);
    } else if (key == "k_iters") {
        cfg.k_iters = static_cast<std::size_t>(to_uint(key, value));
    } else if (key == "perturb_grid") {
        cfg.perturb_grid = to_bool(key, value);
    } else if (key == "perturb_fraction") {
        cfg.perturb_fraction = to_double(key, value);
    } else if (key == "dim_permutation") {
        cfg.dim_permutation = to_size_list(key, value);
    } else if (key == "out") {
        cfg.output = std::string(value);
    } else if (key == "threads") {
        cfg.threads = static_cast<std::size_t>(to_uint(key, value));
    } else {
        throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
    }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base)
{
    std::string line;
    std::size_t lineno = 0;
    bool modes_reset = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos)
            text = text.substr(0, hash);
        text = trim(text);
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const auto key = trim(text.substr(0, eq));
        try {
            if (key == "mode" && !modes_reset) {
                base.signal.modes.clear();
                modes_reset = true;
            }
            apply_setting(base, key, text.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

std::string format_config(const ExperimentConfig& cfg)
{
    std::ostringstream os;
    if (cfg.signal_name == "custom") {
        os << "sizes = " << join(cfg.signal.sizes) << '\n';
    } else {
        os << "signal = " << cfg.signal_name << '\n';
        os << "# sizes = " << join(cfg.signal.sizes) << '\n';
    }
    for (const auto& m : cfg.signal.modes) {
        os << (cfg.signal_name == "custom" ? "mode = " : "# mode = ");
        for (std::size_t r = 0; r < m.order(); ++r)
            os << num(m.freqs[r]) << ',' << num(m.damps[r]) << ',';
        os << num(m.amplitude.real()) << ',' << num(m.amplitude.imag()) << '\n';
    }
    os << "snr = " << join(cfg.snr_db) << '\n'
       << "trials = " << cfg.trials << '\n'
       << "seed = " << cfg.master_seed << '\n'
       << "estimator = " << to_string(cfg.estimator) << '\n'
       << "n_freq0 = " << cfg.multigrid.n_freq0 << '\n'
       << "n_damp0 = " << cfg.multigrid.n_damp0 << '\n'
       << "beta_min = " << num(cfg.multigrid.beta_min) << '\n'
       << "eta_nu = " << cfg.multigrid.eta_nu << '\n'
       << "eta_alpha = " << cfg.multigrid.eta_alpha << '\n'
       << "levels = " << cfg.multigrid.levels << '\n'
       << "freq_tol = " << num(cfg.multigrid.freq_tol) << '\n'
       << "damp_tol = " << num(cfg.multigrid.damp_tol) << '\n'
       << "k_iters = " << cfg.k_iters << '\n'
       << "perturb_grid = " << (cfg.perturb_grid ? "true" : "false") << '\n'
       << "perturb_fraction = " << num(cfg.perturb_fraction) << '\n'
       << "dim_permutation = " << join(cfg.dim_permutation) << '\n'
       << "out = " << cfg.output << '\n';
    return os.str();
}

}  // namespace rdmodal
