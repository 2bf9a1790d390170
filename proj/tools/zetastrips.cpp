#include "zetastrips/commands.hpp"
#include "zetastrips/error.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace zetastrips;

namespace {

struct Flags {
    std::optional<std::string> config_file;
    std::optional<double> t_max;
    std::optional<long> m_max;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::optional<std::string> cache;
    std::optional<double> precision;
};

void add_common(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config_file, "key = value settings file (flags override)");
    cmd->add_option("--t-max", f.t_max, "height bound for strips");
    cmd->add_option("--m-max", f.m_max, "number of strips (derived from --t-max if omitted)");
    cmd->add_option("--threads", f.threads, "worker threads");
    cmd->add_option("--out", f.out, "artifact directory");
    cmd->add_option("--cache", f.cache, "cache directory");
    cmd->add_option("--precision", f.precision, "target absolute error of zeta");
}

RunConfig resolve(const Flags& f)
{
    RunConfig config;
    if (f.config_file) {
        apply_config_file(config, *f.config_file);
    }
    if (f.t_max) {
        config.t_max = *f.t_max;
    }
    if (f.m_max) {
        config.m_max = *f.m_max;
    }
    if (f.threads) {
        if (*f.threads < 1) {
            throw Error(ErrorKind::InvalidConfig, "threads must be >= 1");
        }
        config.threads = static_cast<unsigned>(*f.threads);
    }
    if (f.out) {
        config.out_dir = *f.out;
    }
    if (f.cache) {
        config.cache_dir = *f.cache;
    }
    if (f.precision && set_precision(config, *f.precision)) {
        std::cerr << "warning: --precision clamped to 1e-6\n";
    }
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Strips of the Riemann zeta function bounded by Im zeta = 0 contours"};
    app.require_subcommand(1);

    Flags flags;
    ComputeOptions compute_options;
    int figure = 0;

    auto* compute = app.add_subcommand("compute", "trace contours, enumerate zeros, fill the cache");
    add_common(compute, flags);
    compute->add_option("--dump-contour", compute_options.dump_contours,
                        "also write the traced contour for launch index K");
    auto* analyze = app.add_subcommand("analyze", "fits and statistics from the cache");
    add_common(analyze, flags);
    auto* plot = app.add_subcommand("plot", "render a figure as SVG");
    add_common(plot, flags);
    plot->add_option("--figure", figure, "figure number 1..16")->required();
    auto* verify = app.add_subcommand("verify", "quick self-check");
    add_common(verify, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    RunConfig config;
    try {
        config = resolve(flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Io ? kExitIo : kExitUsage;
    }

    if (compute->parsed()) {
        return cmd_compute(config, std::cout, std::cerr, compute_options);
    }
    if (analyze->parsed()) {
        return cmd_analyze(config, std::cout, std::cerr);
    }
    if (plot->parsed()) {
        return cmd_plot(config, figure, std::cout, std::cerr);
    }
    return cmd_verify(config, std::cout, std::cerr);
}
