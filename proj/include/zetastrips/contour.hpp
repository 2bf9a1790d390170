#pragma once

#include "zetastrips/error.hpp"
#include "zetastrips/zeta.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zetastrips {

struct TraceParams {
    double sigma_start = 5.0;
    double sigma_min = 0.0;
    /// Rightward traces stop at the window edge.
    double sigma_max = kWindowSigmaMax;
    /// Arc-length step; also the cap for step growth.
    double step = 0.02;
    double newton_tol = 1e-10;
    double zero_radius = 1e-4;
    long max_steps = 1'000'000;

    void validate() const;
};

enum class Direction { Leftward, Rightward };

enum class Terminal { ReachedSigmaMin, ReachedSigmaMax, TerminatedAtZero, Aborted };

/// A traced piece of an Im zeta = 0 level curve.
struct ContourPath {
    /// Launch index: the curve meets sigma = +inf at height k pi / ln 2 (0 if unknown).
    long k = 0;
    std::vector<ComplexPoint> points;
    /// zeta at each recorded point.
    std::vector<Complex> values;
    Terminal terminal = Terminal::Aborted;
    std::optional<ComplexPoint> zero;
    std::optional<ErrorKind> abort_kind;
    std::string abort_reason;
    /// Height of the first crossing of sigma = 1/2, refined on the line.
    std::optional<double> crossing_t;
    std::vector<double> crossings;
    double min_abs_zeta = 0.0;
    long evaluations = 0;
    long rejected_steps = 0;
};

struct PhaseSample {
    double theta = 0.0;
};

/// Start of the k-th launch contour on sigma = sigma_start, corrected onto
/// Im zeta = 0 from the seed k pi / ln 2.
ComplexPoint launch_point(long k, const EvalParams& eval, const TraceParams& params);

/// Predictor-corrector continuation of the Im zeta = 0 curve through `start`.
///
/// `direction` picks the initial orientation by the sign of the sigma
/// component of the tangent; afterwards the orientation is held fixed by the
/// sense in which Re zeta changes, which is strictly monotone along the curve.
/// Never throws for StepCollapse / MaxSteps: those end the path as Aborted.
ContourPath trace(ComplexPoint start, Direction direction, const EvalParams& eval,
                  const TraceParams& params, long k = 0);

/// Continuous arg zeta along a path, starting from the principal value at the
/// launch end. Throws PhaseJump if consecutive samples differ by pi or more.
std::vector<PhaseSample> unwrap_phase(const ContourPath& path);

/// Bottom boundary of strip m: crossing of sigma = 1/2 by launch contour 2m.
struct SpecialGramPoint {
    long m = 0;
    double height = 0.0;
    /// n with rs_theta(height) ~ n pi.
    long gram_index = 0;
    double min_abs_zeta = 0.0;
    long crossings = 0;
    long evaluations = 0;
};

SpecialGramPoint special_gram_point(long m, const EvalParams& eval, const TraceParams& params);

/// Terminal zero of launch contour 2m+1.
struct PrimaryZero {
    long m = 0;
    ComplexPoint zero;
    long evaluations = 0;
};

/// Traces the primary contour of strip m. When the strip boundaries are not
/// supplied they are traced as well.
PrimaryZero primary_zero_of_strip(long m, const EvalParams& eval, const TraceParams& params,
                                  std::optional<std::pair<double, double>> bounds = std::nullopt);

} // namespace zetastrips
