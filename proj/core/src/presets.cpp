#include "rdmodal/presets.hpp"

#include <sstream>
#include <stdexcept>

namespace rdmodal {

namespace {

// {nu_1, alpha_1, nu_2, alpha_2, ...}, unit amplitude.
RdMode tone(std::initializer_list<double> pairs)
{
    RdMode m;
    auto it = pairs.begin();
    while (it != pairs.end()) {
        m.freqs.push_back(*it++);
        m.damps.push_back(*it++);
    }
    return m;
}

}  // namespace

SignalSpec preset(std::string_view name)
{
    SignalSpec s;
    if (name == "signal1") {
        s.sizes = {10, 10};
        s.modes = {tone({0.22, -0.011, 0.34, -0.015})};
    } else if (name == "signal2") {
        s.sizes = {8, 8, 8};
        s.modes = {tone({0.40, -0.01, 0.1, -0.01, 0.1, -0.01}),
                   tone({0.20, -0.01, 0.3, -0.15, 0.25, -0.01})};
    } else if (name == "signal3") {
        s.sizes = {10, 10, 10};
        s.modes = {tone({0.30, -0.01, 0.31, -0.01, 0.22, -0.01}),
                   tone({0.10, -0.01, 0.45, -0.015, 0.11, -0.01}),
                   tone({0.20, -0.01, 0.31, -0.01, 0.11, -0.01})};
    } else if (name == "signal4") {
        s.sizes = {10, 10, 10};
        s.modes = {tone({0.28, -0.01, 0.31, -0.01, 0.22, -0.01}),
                   tone({0.12, -0.01, 0.45, -0.015, 0.11, -0.01}),
                   tone({0.20, -0.01, 0.31, -0.01, 0.11, -0.01})};
    } else if (name == "signal5") {
        s.sizes = {10, 3, 3};
        s.modes = {tone({0.30, -0.01, 0.1, -0.01, 0.1, -0.01}),
                   tone({0.13, -0.01, 0.45, -0.015, 0.4, -0.01}),
                   tone({0.20, -0.01, 0.31, -0.01, 0.1, -0.01}),
                   tone({0.42, -0.012, 0.22, -0.01, 0.32, -0.01})};
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return s;
}

std::vector<std::string> preset_names()
{
    return {"signal1", "signal2", "signal3", "signal4", "signal5"};
}

std::string describe(const SignalSpec& spec)
{
    std::ostringstream os;
    for (std::size_t r = 0; r < spec.sizes.size(); ++r)
        os << (r ? "x" : "") << spec.sizes[r];
    os << ", " << spec.modes.size() << (spec.modes.size() == 1 ? " mode" : " modes");
    return os.str();
}

}  // namespace rdmodal
