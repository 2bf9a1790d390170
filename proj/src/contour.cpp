#include "zetastrips/contour.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace zetastrips {

namespace {

using std::numbers::ln2;
using std::numbers::pi;

constexpr double kCriticalLine = 0.5;
constexpr double kMinStep = 1e-6;
constexpr int kMaxCorrectorIterations = 8;
constexpr int kHardCorrectorIterations = 3;
constexpr int kEasyStepsBeforeGrowth = 5;

struct Sample {
    ComplexPoint at;
    Complex value;
    Complex derivative;
};

class Evaluator {
public:
    explicit Evaluator(const EvalParams& params) : params_(params) {}

    Sample operator()(ComplexPoint p)
    {
        ++count;
        const ZetaValue z = zeta(p, params_, true);
        return {p, z.value, *z.derivative};
    }

    long count = 0;

private:
    const EvalParams& params_;
};

bool on_level(const Complex& value, double tol)
{
    return std::abs(value.imag()) < tol * std::max(1.0, std::abs(value));
}

// Unit direction in which Re zeta increases along the level curve.
ComplexPoint ascent_tangent(const Complex& derivative)
{
    const double norm = std::abs(derivative);
    return {derivative.real() / norm, -derivative.imag() / norm};
}

// Newton on zeta itself; converged root or nothing.
std::optional<ComplexPoint> polish_zero(Evaluator& eval, ComplexPoint from)
{
    Complex z = from.s();
    for (int it = 0; it < 40; ++it) {
        const Sample smp = eval({z.real(), z.imag()});
        if (std::abs(smp.derivative) == 0.0) {
            return std::nullopt;
        }
        const Complex delta = smp.value / smp.derivative;
        z -= delta;
        if (std::abs(delta) < 1e-14 * std::max(1.0, std::abs(z))) {
            return ComplexPoint{z.real(), z.imag()};
        }
    }
    return std::nullopt;
}

// Im zeta(1/2 + it) = 0 near `seed`; d/dt Im zeta = Re zeta'.
std::optional<double> refine_crossing(Evaluator& eval, double seed, double window)
{
    double t = seed;
    for (int it = 0; it < 40; ++it) {
        const Sample smp = eval({kCriticalLine, t});
        const double slope = smp.derivative.real();
        if (slope == 0.0) {
            return std::nullopt;
        }
        const double dt = smp.value.imag() / slope;
        t -= dt;
        if (std::abs(t - seed) > window) {
            return std::nullopt;
        }
        if (std::abs(dt) < 1e-14 * t) {
            return t;
        }
    }
    return std::nullopt;
}

} // namespace

void TraceParams::validate() const
{
    if (!(sigma_start >= 4.0 && sigma_start <= kWindowSigmaMax)) {
        throw Error(ErrorKind::InvalidConfig, "sigma_start must lie in [4, 8]");
    }
    if (!(step > 0.0 && step <= 0.1)) {
        throw Error(ErrorKind::InvalidConfig, "step must lie in (0, 0.1]");
    }
    if (!(zero_radius > 0.0 && zero_radius <= 1e-2)) {
        throw Error(ErrorKind::InvalidConfig, "zero_radius must lie in (0, 1e-2]");
    }
    if (!(newton_tol > 0.0 && newton_tol < 1e-6)) {
        throw Error(ErrorKind::InvalidConfig, "newton_tol must lie in (0, 1e-6)");
    }
    if (!(sigma_min >= kWindowSigmaMin && sigma_min < kCriticalLine)) {
        throw Error(ErrorKind::InvalidConfig, "sigma_min must lie in [-2, 0.5)");
    }
    if (!(sigma_max > sigma_start && sigma_max <= kWindowSigmaMax)) {
        throw Error(ErrorKind::InvalidConfig, "sigma_max must lie in (sigma_start, 8]");
    }
    if (max_steps < 1) {
        throw Error(ErrorKind::InvalidConfig, "max_steps must be positive");
    }
}

ComplexPoint launch_point(long k, const EvalParams& eval, const TraceParams& params)
{
    if (k < 1) {
        throw Error(ErrorKind::DomainError, "launch index must be positive", k);
    }
    Evaluator zeta_at(eval);
    const double seed = static_cast<double>(k) * pi / ln2;
    double t = seed;
    for (int it = 0; it < 50; ++it) {
        const Sample smp = zeta_at({params.sigma_start, t});
        if (on_level(smp.value, params.newton_tol)) {
            if (std::abs(t - seed) > 0.5 * pi / ln2) {
                std::ostringstream msg;
                msg << "launch height " << t << " drifted from seed " << seed;
                throw Error(ErrorKind::SeedDrift, msg.str(), k);
            }
            if (!(smp.value.real() > 0.0)) {
                throw Error(ErrorKind::SeedDrift, "Re zeta <= 0 at launch", k);
            }
            return {params.sigma_start, t};
        }
        t -= smp.value.imag() / smp.derivative.real();
    }
    throw Error(ErrorKind::ConvergenceFailure, "launch Newton did not converge", k);
}

ContourPath trace(ComplexPoint start, Direction direction, const EvalParams& eval,
                  const TraceParams& params, long k)
{
    Evaluator zeta_at(eval);
    ContourPath path;
    path.k = k;

    Sample cur = zeta_at(start);
    if (!on_level(cur.value, params.newton_tol)) {
        throw Error(ErrorKind::DomainError, "trace start is not on Im zeta = 0", k);
    }
    path.points.push_back(cur.at);
    path.values.push_back(cur.value);
    path.min_abs_zeta = std::abs(cur.value);

    // +1: walk towards increasing Re zeta, -1: decreasing.
    const double initial_sigma = ascent_tangent(cur.derivative).sigma;
    const bool want_left = direction == Direction::Leftward;
    const double orient = ((initial_sigma < 0.0) == want_left) ? 1.0 : -1.0;

    const auto finish = [&](Terminal terminal) {
        path.terminal = terminal;
        path.evaluations = zeta_at.count;
        if (!path.crossings.empty()) {
            path.crossing_t = path.crossings.front();
        }
        return path;
    };
    const auto abort = [&](ErrorKind kind, const std::string& reason) {
        path.abort_kind = kind;
        path.abort_reason = reason;
        return finish(Terminal::Aborted);
    };

    double h = params.step;
    int easy_steps = 0;
    for (long attempt = 0;; ++attempt) {
        if (attempt >= params.max_steps) {
            return abort(ErrorKind::MaxSteps, "max_steps reached");
        }
        if (h < kMinStep) {
            std::ostringstream msg;
            msg << "step collapsed near s = " << cur.at.sigma << " + " << cur.at.t << "i";
            return abort(ErrorKind::StepCollapse, msg.str());
        }

        const ComplexPoint tangent = ascent_tangent(cur.derivative);
        // clip the predictor at the sigma bounds instead of leaving the window
        double reach = h;
        const double ds = orient * tangent.sigma;
        if (cur.at.sigma + h * ds > params.sigma_max) {
            reach = (params.sigma_max - cur.at.sigma) / ds;
        } else if (cur.at.sigma + h * ds < params.sigma_min) {
            reach = (params.sigma_min - cur.at.sigma) / ds;
        }
        if (reach < kMinStep) {
            return finish(ds > 0.0 ? Terminal::ReachedSigmaMax : Terminal::ReachedSigmaMin);
        }
        ComplexPoint q{cur.at.sigma + orient * reach * tangent.sigma,
                       cur.at.t + orient * reach * tangent.t};

        // Corrector: minimal-norm Newton steps along grad Im zeta = (Im z', Re z').
        Sample next{};
        int newton_steps = 0;
        bool converged = false;
        for (int it = 0; it <= kMaxCorrectorIterations; ++it) {
            if (!q.in_window()) {
                break;
            }
            next = zeta_at(q);
            if (on_level(next.value, params.newton_tol)) {
                converged = true;
                break;
            }
            const double gs = next.derivative.imag();
            const double gt = next.derivative.real();
            const double scale = next.value.imag() / (gs * gs + gt * gt);
            q = {q.sigma - scale * gs, q.t - scale * gt};
            ++newton_steps;
        }
        if (!converged) {
            ++path.rejected_steps;
            h *= 0.5;
            easy_steps = 0;
            continue;
        }

        const double re_prev = cur.value.real();
        const double re_next = next.value.real();
        const bool approaching_zero = orient * re_prev < 0.0;

        // Re zeta flipped sign: a zero lies between the two points.
        if (approaching_zero && re_prev * re_next <= 0.0) {
            if (auto root = polish_zero(zeta_at, cur.at);
                root && std::hypot(root->sigma - cur.at.sigma, root->t - cur.at.t) <= 2.0 * h) {
                path.zero = root;
                return finish(Terminal::TerminatedAtZero);
            }
            ++path.rejected_steps;
            h *= 0.5;
            easy_steps = 0;
            continue;
        }

        const double dist = std::hypot(q.sigma - cur.at.sigma, q.t - cur.at.t);
        if (orient * (re_next - re_prev) <= 0.0 || dist > 2.0 * h) {
            // left the branch we were following
            ++path.rejected_steps;
            h *= 0.5;
            easy_steps = 0;
            continue;
        }

        // sigma = 1/2 crossing between cur and next
        if ((cur.at.sigma - kCriticalLine) * (next.at.sigma - kCriticalLine) <= 0.0
            && cur.at.sigma != next.at.sigma) {
            const double frac = (kCriticalLine - cur.at.sigma) / (next.at.sigma - cur.at.sigma);
            const double seed = cur.at.t + frac * (next.at.t - cur.at.t);
            const auto refined = refine_crossing(zeta_at, seed, 2.0 * h);
            if (!refined) {
                ++path.rejected_steps;
                h *= 0.5;
                easy_steps = 0;
                continue;
            }
            path.crossings.push_back(*refined);
        }

        cur = next;
        const double mag = std::abs(cur.value);
        const bool near_zero = approaching_zero
                               && (mag < params.zero_radius
                                   || mag < h * std::abs(cur.derivative));
        if (!near_zero || mag >= params.zero_radius) {
            path.points.push_back(cur.at);
            path.values.push_back(cur.value);
            path.min_abs_zeta = std::min(path.min_abs_zeta, mag);
        }

        if (near_zero) {
            if (auto root = polish_zero(zeta_at, cur.at);
                root && std::hypot(root->sigma - cur.at.sigma, root->t - cur.at.t) <= 2.0 * h) {
                path.zero = root;
                return finish(Terminal::TerminatedAtZero);
            }
        }
        if (cur.at.sigma <= params.sigma_min + kMinStep) {
            return finish(Terminal::ReachedSigmaMin);
        }
        if (cur.at.sigma >= params.sigma_max - kMinStep) {
            return finish(Terminal::ReachedSigmaMax);
        }

        if (newton_steps > kHardCorrectorIterations || mag < 10.0 * params.zero_radius) {
            h *= 0.5;
            easy_steps = 0;
        } else if (++easy_steps >= kEasyStepsBeforeGrowth) {
            h = std::min(2.0 * h, params.step);
            easy_steps = 0;
        }
    }
}

std::vector<PhaseSample> unwrap_phase(const ContourPath& path)
{
    if (path.values.empty()) {
        throw Error(ErrorKind::DomainError, "unwrap_phase on an empty path", path.k);
    }
    std::vector<PhaseSample> out;
    out.reserve(path.values.size());
    double prev_arg = std::arg(path.values.front());
    double theta = prev_arg;
    out.push_back({theta});
    for (std::size_t i = 1; i < path.values.size(); ++i) {
        const double arg = std::arg(path.values[i]);
        double delta = arg - prev_arg;
        delta -= 2.0 * pi * std::round(delta / (2.0 * pi));
        if (std::abs(delta) >= pi * (1.0 - 1e-12)) {
            std::ostringstream msg;
            msg << "phase jump of " << delta << " at sample " << i;
            throw Error(ErrorKind::PhaseJump, msg.str(), path.k);
        }
        theta += delta;
        prev_arg = arg;
        out.push_back({theta});
    }
    return out;
}

namespace {

void require_finished(const ContourPath& path, long index)
{
    if (path.terminal == Terminal::Aborted) {
        throw Error(path.abort_kind.value_or(ErrorKind::StepCollapse),
                    "launch contour " + std::to_string(path.k) + ": " + path.abort_reason, index);
    }
}

} // namespace

SpecialGramPoint special_gram_point(long m, const EvalParams& eval, const TraceParams& params)
{
    if (m < 1) {
        throw Error(ErrorKind::DomainError, "strip numbers start at 1", m);
    }
    const long k = 2 * m;
    const ContourPath path = trace(launch_point(k, eval, params), Direction::Leftward, eval,
                                   params, k);
    require_finished(path, m);
    if (path.terminal == Terminal::TerminatedAtZero) {
        std::ostringstream msg;
        msg << "boundary contour " << k << " ends at a zero near t = " << path.zero->t;
        throw Error(ErrorKind::NotSpecial, msg.str(), m);
    }
    if (!path.crossing_t) {
        throw Error(ErrorKind::NotSpecial, "boundary contour never reaches sigma = 1/2", m);
    }
    if (!(path.min_abs_zeta > params.zero_radius)) {
        throw Error(ErrorKind::NotSpecial, "boundary contour passes within zero_radius of a zero",
                    m);
    }

    const double height = *path.crossing_t;
    const double turns = rs_theta(height) / pi;
    const double index = std::round(turns);
    if (std::abs(turns - index) >= 1e-6) {
        std::ostringstream msg;
        msg << "crossing at t = " << height << " is not a Gram point (theta/pi = " << turns << ")";
        throw Error(ErrorKind::NotSpecial, msg.str(), m);
    }
    const ZetaValue at_crossing = zeta({kCriticalLine, height}, eval);
    if (!(at_crossing.value.real() > 0.0)) {
        throw Error(ErrorKind::NotSpecial, "Re zeta <= 0 at boundary crossing", m);
    }

    SpecialGramPoint out;
    out.m = m;
    out.height = height;
    out.gram_index = static_cast<long>(index);
    out.min_abs_zeta = path.min_abs_zeta;
    out.crossings = static_cast<long>(path.crossings.size());
    out.evaluations = path.evaluations;
    return out;
}

PrimaryZero primary_zero_of_strip(long m, const EvalParams& eval, const TraceParams& params,
                                  std::optional<std::pair<double, double>> bounds)
{
    if (m < 1) {
        throw Error(ErrorKind::DomainError, "strip numbers start at 1", m);
    }
    const long k = 2 * m + 1;
    const ContourPath path = trace(launch_point(k, eval, params), Direction::Leftward, eval,
                                   params, k);
    require_finished(path, m);
    if (path.terminal != Terminal::TerminatedAtZero) {
        throw Error(ErrorKind::NoTerminalZero,
                    "primary contour " + std::to_string(k) + " reached sigma_min", m);
    }
    const ComplexPoint zero = *path.zero;

    if (!bounds) {
        bounds = std::pair{special_gram_point(m, eval, params).height,
                           special_gram_point(m + 1, eval, params).height};
    }
    if (!(zero.t > bounds->first && zero.t < bounds->second)) {
        std::ostringstream msg;
        msg << "primary zero at t = " << zero.t << " outside strip [" << bounds->first << ", "
            << bounds->second << ")";
        throw Error(ErrorKind::EscapedStrip, msg.str(), m);
    }
    if (std::abs(zero.sigma - kCriticalLine) >= 1e-6) {
        std::ostringstream msg;
        msg << "primary zero at sigma = " << zero.sigma;
        throw Error(ErrorKind::OffCriticalLine, msg.str(), m);
    }
    return {m, zero, path.evaluations};
}

} // namespace zetastrips
