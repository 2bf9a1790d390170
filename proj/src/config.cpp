#include "zetastrips/config.hpp"

#include "zetastrips/error.hpp"
#include "zetastrips/io.hpp"
#include "zetastrips/strips.hpp"

#include <fstream>
#include <sstream>

namespace zetastrips {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double as_double(std::string_view key, std::string_view value)
{
    try {
        return io::parse_double(value);
    } catch (const Error&) {
        throw Error(ErrorKind::InvalidConfig,
                    "'" + std::string(key) + "' expects a number, got '" + std::string(value) + "'");
    }
}

long as_long(std::string_view key, std::string_view value)
{
    try {
        return io::parse_long(value);
    } catch (const Error&) {
        throw Error(ErrorKind::InvalidConfig, "'" + std::string(key) + "' expects an integer, got '"
                                                  + std::string(value) + "'");
    }
}

} // namespace

long RunConfig::resolved_m_max() const
{
    return m_max ? *m_max : strips_below(t_max);
}

void RunConfig::validate() const
{
    if (!(t_max <= kWindowTMax)) {
        throw Error(ErrorKind::InvalidConfig, "t_max must not exceed 1.1e4");
    }
    const long m = resolved_m_max();
    if (m < 1) {
        throw Error(ErrorKind::InvalidConfig, "t_max too small for a single complete strip");
    }
    // the top boundary of the last strip must stay inside the window
    if (static_cast<double>(m + 2) * 9.06472028 > kWindowTMax) {
        throw Error(ErrorKind::InvalidConfig, "m_max reaches beyond the evaluation window");
    }
    if (threads < 1) {
        throw Error(ErrorKind::InvalidConfig, "threads must be >= 1");
    }
    eval.validate();
    trace.validate();
}

std::string RunConfig::fingerprint() const
{
    std::ostringstream key;
    key << "m_max=" << resolved_m_max() << ";em_factor=" << io::fmt_exact(eval.em_terms_factor)
        << ";K=" << eval.bernoulli_order << ";target=" << io::fmt_exact(eval.target_abs_error)
        << ";sigma_start=" << io::fmt_exact(trace.sigma_start)
        << ";sigma_min=" << io::fmt_exact(trace.sigma_min) << ";step=" << io::fmt_exact(trace.step)
        << ";newton_tol=" << io::fmt_exact(trace.newton_tol)
        << ";zero_radius=" << io::fmt_exact(trace.zero_radius) << ";max_steps=" << trace.max_steps;
    return key.str();
}

bool set_precision(RunConfig& config, double target)
{
    if (!(target > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "precision must be positive");
    }
    const bool clamped = target > 1e-6;
    config.eval.target_abs_error = clamped ? 1e-6 : target;
    return clamped;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value)
{
    if (key == "t_max" || key == "t-max") {
        config.t_max = as_double(key, value);
    } else if (key == "m_max" || key == "m-max") {
        config.m_max = as_long(key, value);
    } else if (key == "threads") {
        const long n = as_long(key, value);
        if (n < 1) {
            throw Error(ErrorKind::InvalidConfig, "threads must be >= 1");
        }
        config.threads = static_cast<unsigned>(n);
    } else if (key == "out") {
        config.out_dir = std::string(value);
    } else if (key == "cache") {
        config.cache_dir = std::string(value);
    } else if (key == "precision") {
        set_precision(config, as_double(key, value));
    } else if (key == "em_terms_factor") {
        config.eval.em_terms_factor = as_double(key, value);
    } else if (key == "bernoulli_order") {
        config.eval.bernoulli_order = static_cast<int>(as_long(key, value));
    } else if (key == "sigma_start") {
        config.trace.sigma_start = as_double(key, value);
    } else if (key == "sigma_min") {
        config.trace.sigma_min = as_double(key, value);
    } else if (key == "step") {
        config.trace.step = as_double(key, value);
    } else if (key == "newton_tol") {
        config.trace.newton_tol = as_double(key, value);
    } else if (key == "zero_radius") {
        config.trace.zero_radius = as_double(key, value);
    } else if (key == "max_steps") {
        config.trace.max_steps = as_long(key, value);
    } else {
        throw Error(ErrorKind::InvalidConfig, "unknown setting '" + std::string(key) + "'");
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open config file " + path.string());
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig,
                        path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        apply_setting(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    }
}

} // namespace zetastrips
