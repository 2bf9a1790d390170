#include "zetastrips/pipeline.hpp"

#include "zetastrips/error.hpp"
#include "zetastrips/io.hpp"

#include <json.hpp>

#include <numbers>
#include <ostream>

namespace zetastrips {

namespace {

constexpr double kStripHeight = 2.0 * std::numbers::pi / std::numbers::ln2;
constexpr int kArchPMax = 10;
constexpr int kArchQMax = 4;
// below this the arch windows hold too few strips to resolve levels
constexpr double kArchMinCenter = 40.0;

// ---- cache payloads (shortest round-trip formatting) ----

std::string encode_gram(const GramTable& gram)
{
    io::CsvWriter w({"n", "g"});
    for (long n = gram.first_index(); n <= gram.last_index(); ++n) {
        w.cell(n).exact(gram.height(n)).end_row();
    }
    return w.str();
}

GramTable decode_gram(const std::string& payload)
{
    const auto table = io::parse_csv(payload);
    const auto cn = table.column("n");
    const auto cg = table.column("g");
    std::vector<double> heights;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (io::parse_long(table.rows[i][cn]) != static_cast<long>(i) - 1) {
            throw Error(ErrorKind::CacheCorrupt, "Gram cache indices not consecutive");
        }
        heights.push_back(io::parse_double(table.rows[i][cg]));
    }
    return GramTable::from_heights(std::move(heights));
}

std::string encode_boundaries(const std::vector<SpecialGramPoint>& b)
{
    io::CsvWriter w({"m", "height", "gram_index", "min_abs_zeta", "crossings", "evaluations"});
    for (const auto& p : b) {
        w.cell(p.m).exact(p.height).cell(p.gram_index).exact(p.min_abs_zeta).cell(p.crossings)
            .cell(p.evaluations).end_row();
    }
    return w.str();
}

std::vector<SpecialGramPoint> decode_boundaries(const std::string& payload)
{
    const auto table = io::parse_csv(payload);
    std::vector<SpecialGramPoint> out;
    for (const auto& row : table.rows) {
        SpecialGramPoint p;
        p.m = io::parse_long(row[table.column("m")]);
        p.height = io::parse_double(row[table.column("height")]);
        p.gram_index = io::parse_long(row[table.column("gram_index")]);
        p.min_abs_zeta = io::parse_double(row[table.column("min_abs_zeta")]);
        p.crossings = io::parse_long(row[table.column("crossings")]);
        p.evaluations = io::parse_long(row[table.column("evaluations")]);
        out.push_back(p);
    }
    return out;
}

std::string encode_zeros(const std::vector<std::vector<double>>& zeros,
                         const std::vector<SpecialGramPoint>& boundaries)
{
    io::CsvWriter w({"strip_m", "t"});
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        for (double t : zeros[i]) {
            w.cell(boundaries[i].m).exact(t).end_row();
        }
    }
    return w.str();
}

std::vector<std::vector<double>> decode_zeros(const std::string& payload,
                                              const std::vector<SpecialGramPoint>& boundaries)
{
    const auto table = io::parse_csv(payload);
    std::vector<std::vector<double>> out(boundaries.empty() ? 0 : boundaries.size() - 1);
    const long first_m = boundaries.empty() ? 1 : boundaries.front().m;
    for (const auto& row : table.rows) {
        const long m = io::parse_long(row[table.column("strip_m")]);
        const long slot = m - first_m;
        if (slot < 0 || static_cast<std::size_t>(slot) >= out.size()) {
            throw Error(ErrorKind::CacheCorrupt, "zero cache refers to unknown strip");
        }
        out[static_cast<std::size_t>(slot)].push_back(io::parse_double(row[table.column("t")]));
    }
    return out;
}

std::string encode_primaries(const std::vector<PrimaryZero>& p)
{
    io::CsvWriter w({"m", "primary_sigma", "primary_t", "evaluations"});
    for (const auto& z : p) {
        w.cell(z.m).exact(z.zero.sigma).exact(z.zero.t).cell(z.evaluations).end_row();
    }
    return w.str();
}

std::vector<PrimaryZero> decode_primaries(const std::string& payload)
{
    const auto table = io::parse_csv(payload);
    std::vector<PrimaryZero> out;
    for (const auto& row : table.rows) {
        PrimaryZero z;
        z.m = io::parse_long(row[table.column("m")]);
        z.zero.sigma = io::parse_double(row[table.column("primary_sigma")]);
        z.zero.t = io::parse_double(row[table.column("primary_t")]);
        z.evaluations = io::parse_long(row[table.column("evaluations")]);
        out.push_back(z);
    }
    return out;
}

double gram_extent(long m_max)
{
    // top boundary of the last strip plus the largest observed deviation
    return static_cast<double>(m_max + 1) * kStripHeight + 3.0;
}

template <typename Decode, typename Compute, typename Encode>
auto stage(Cache& cache, CacheKind kind, const std::string& key, bool& cached, std::ostream& log,
           Decode decode, Compute compute, Encode encode)
{
    try {
        if (auto payload = cache.load(kind, key)) {
            cached = true;
            log << "cache: " << to_string(kind) << " loaded\n";
            return decode(*payload);
        }
    } catch (const Error& e) {
        log << "cache: " << e.what() << "; recomputing\n";
    }
    cached = false;
    log << "compute: " << to_string(kind) << "...\n" << std::flush;
    auto value = compute();
    cache.store(kind, key, encode(value));
    return value;
}

double round12(double v)
{
    return io::parse_double(io::fmt12(v));
}

nlohmann::json fit_to_json(const LinearFit& f)
{
    return {{"slope", round12(f.slope)},
            {"intercept", round12(f.intercept)},
            {"slope_se", round12(f.slope_se)},
            {"intercept_se", round12(f.intercept_se)},
            {"n", f.n}};
}

} // namespace

Dataset compute_dataset(const RunConfig& config, Cache& cache, ComputeReport& report,
                        std::ostream& log)
{
    config.validate();
    const long m_max = config.resolved_m_max();
    const std::string key = config.fingerprint();
    const unsigned threads = config.threads;
    Dataset d;

    d.gram = stage(
        cache, CacheKind::Gram, key, report.gram_cached, log, decode_gram,
        [&] { return GramTable::up_to(gram_extent(m_max)); }, encode_gram);

    d.boundaries = stage(
        cache, CacheKind::Boundaries, key, report.boundaries_cached, log, decode_boundaries,
        [&] { return trace_boundaries(1, m_max + 1, config.eval, config.trace, threads); },
        encode_boundaries);

    d.zeros = stage(
        cache, CacheKind::Zeros, key, report.zeros_cached, log,
        [&](const std::string& p) { return decode_zeros(p, d.boundaries); },
        [&] { return enumerate_strip_zeros(d.boundaries, config.eval, threads); },
        [&](const auto& z) { return encode_zeros(z, d.boundaries); });

    d.primaries = stage(
        cache, CacheKind::Strips, key, report.strips_cached, log, decode_primaries,
        [&] { return trace_primaries(d.boundaries, config.eval, config.trace, threads); },
        encode_primaries);

    d.strips = assemble_strips(d.boundaries, d.primaries, d.zeros, d.gram);
    return d;
}

std::optional<Dataset> load_dataset(const RunConfig& config, const Cache& cache)
{
    const std::string key = config.fingerprint();
    const auto gram = cache.load(CacheKind::Gram, key);
    const auto boundaries = cache.load(CacheKind::Boundaries, key);
    const auto zeros = cache.load(CacheKind::Zeros, key);
    const auto primaries = cache.load(CacheKind::Strips, key);
    if (!gram || !boundaries || !zeros || !primaries) {
        return std::nullopt;
    }
    Dataset d;
    d.gram = decode_gram(*gram);
    d.boundaries = decode_boundaries(*boundaries);
    d.zeros = decode_zeros(*zeros, d.boundaries);
    d.primaries = decode_primaries(*primaries);
    try {
        d.strips = assemble_strips(d.boundaries, d.primaries, d.zeros, d.gram);
    } catch (const Error& e) {
        throw Error(ErrorKind::CacheCorrupt, std::string("cached stages inconsistent: ") + e.what());
    }
    return d;
}

std::string gram_csv(const GramTable& gram)
{
    io::CsvWriter w({"n", "g", "gap", "gap_ratio", "gap_ratio_geo"});
    for (const auto& r : gram.gap_ratios()) {
        w.cell(r.n).cell(r.height).cell(r.gap).cell(r.ratio).cell(r.ratio_geo).end_row();
    }
    return w.str();
}

std::string strips_csv(const std::vector<Strip>& strips)
{
    io::CsvWriter w({"m", "bottom", "top", "width", "gram_count", "n_zeros", "primary_index",
                     "primary_height", "primary_stat"});
    for (const auto& s : strips) {
        w.cell(s.m).cell(s.bottom).cell(s.top).cell(s.width).cell(s.gram_count).cell(s.n_zeros())
            .cell(s.primary_index).cell(s.primary_height).cell(s.primary_stat).end_row();
    }
    return w.str();
}

std::string zeros_csv(const std::vector<Strip>& strips)
{
    io::CsvWriter w({"j", "t", "strip_m"});
    for (const auto& s : strips) {
        for (const auto& z : s.zeros) {
            w.cell(z.j).cell(z.t).cell(z.strip_m).end_row();
        }
    }
    return w.str();
}

std::string deviations_csv(const DeviationSeries& bottom, const DeviationSeries& density)
{
    if (bottom.records.size() != density.records.size()) {
        throw Error(ErrorKind::DomainError, "deviation series differ in length");
    }
    io::CsvWriter w({"m", "bottom_dev", "density_dev"});
    for (std::size_t i = 0; i < bottom.records.size(); ++i) {
        w.cell(bottom.records[i].m).cell(bottom.records[i].value).cell(density.records[i].value)
            .end_row();
    }
    return w.str();
}

std::string arches_csv(const std::vector<ArchPrediction>& arches)
{
    io::CsvWriter w({"p", "q", "m_center", "t_center"});
    for (const auto& a : arches) {
        w.cell(static_cast<long>(a.p)).cell(static_cast<long>(a.q)).cell(a.m_center)
            .cell(a.t_center).end_row();
    }
    return w.str();
}

std::string contour_csv(const ContourPath& path)
{
    io::CsvWriter w({"sigma", "t", "re_zeta", "im_zeta"});
    for (std::size_t i = 0; i < path.points.size(); ++i) {
        w.cell(path.points[i].sigma).cell(path.points[i].t).cell(path.values[i].real())
            .cell(path.values[i].imag()).end_row();
    }
    return w.str();
}

AnalysisResult analyze(const std::vector<Strip>& strips)
{
    AnalysisResult r;
    r.bottoms = fit_bottoms(strips);
    r.tops = fit_tops(strips);
    r.density = fit_density(strips);
    r.primary = primary_stats(strips);
    r.bottom_dev = bottom_deviation_series(strips);
    r.arches = arch_centers(kArchPMax, kArchQMax, static_cast<double>(strips.back().m));
    r.branches = arch_branch_spacing(strips, r.arches);

    double gap_sum[kArchQMax + 1] = {};
    int gap_count[kArchQMax + 1] = {};
    for (const auto& b : r.branches) {
        if (b.arch.m_center >= kArchMinCenter) {
            gap_sum[b.arch.q] += b.level_gap;
            ++gap_count[b.arch.q];
        }
    }
    const auto mean_gap = [&](int q) -> std::optional<double> {
        if (gap_count[q] == 0) {
            return std::nullopt;
        }
        return gap_sum[q] / gap_count[q];
    };
    if (const auto g1 = mean_gap(1); g1 && *g1 > 0.0) {
        if (const auto g2 = mean_gap(2)) {
            r.q2_over_q1 = *g2 / *g1;
        }
        if (const auto g3 = mean_gap(3)) {
            r.q3_over_q1 = *g3 / *g1;
        }
    }
    return r;
}

std::string fits_json(const AnalysisResult& r)
{
    nlohmann::json j;
    j["strips"] = r.bottoms.n;
    j["bottoms"] = fit_to_json(r.bottoms);
    j["tops"] = fit_to_json(r.tops);
    j["density_vs_log_m"] = fit_to_json(r.density.vs_log_m);
    j["density_vs_m"] = fit_to_json(r.density.vs_m);
    j["primary"] = {{"mean", round12(r.primary.mean)},
                    {"variance", round12(r.primary.variance)},
                    {"quartile_variance",
                     {round12(r.primary.quartile_variance[0]), round12(r.primary.quartile_variance[1]),
                      round12(r.primary.quartile_variance[2]), round12(r.primary.quartile_variance[3])}},
                    {"n", r.primary.n}};
    auto branches = nlohmann::json::array();
    for (const auto& b : r.branches) {
        branches.push_back({{"p", b.arch.p},
                            {"q", b.arch.q},
                            {"m_center", round12(b.arch.m_center)},
                            {"strips", b.strips},
                            {"levels", b.levels},
                            {"level_gap", round12(b.level_gap)}});
    }
    j["arch_branch_spacing"] = branches;
    j["arch_gap_ratio"] = {
        {"q2_over_q1", r.q2_over_q1 ? nlohmann::json(round12(*r.q2_over_q1)) : nlohmann::json()},
        {"q3_over_q1", r.q3_over_q1 ? nlohmann::json(round12(*r.q3_over_q1)) : nlohmann::json()}};
    return j.dump(2) + "\n";
}

} // namespace zetastrips
