#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "limitlab/combinatorics.hpp"
#include "limitlab/counters.hpp"
#include "limitlab/distributions.hpp"
#include "limitlab/errors.hpp"
#include "limitlab/metrics.hpp"
#include "limitlab/rational.hpp"
#include "limitlab/stein.hpp"
#include "limitlab/version.hpp"
#include "io.hpp"
#include "verify.hpp"

namespace limitlab::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;
constexpr int kExitUsage = 64;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("LIMITLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw validation_error("LIMITLAB_SEED is not a valid unsigned integer");
        }
    }
    return 0;
}

int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Shared context; filled by flags, consumed by every leaf command.
struct Context {
    std::string command_line;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    int workers = 1;
    std::string format = "csv";
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    int exit_code = kExitOk;

    McConfig mc_config() const {
        McConfig cfg;
        cfg.seed = seed;
        cfg.stream_base = stream;
        cfg.workers = workers;
        return cfg;
    }

    void finish(const std::string& out, const std::string& bytes, const std::string& config,
                std::uint64_t stream_count = 0,
                const std::vector<std::pair<std::string, std::string>>& extra = {}) const {
        write_file(out, bytes);
        ManifestData manifest;
        manifest.command_line = command_line;
        manifest.seed = seed;
        manifest.stream_first = stream;
        manifest.stream_count = stream_count;
        manifest.config = config;
        manifest.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        manifest.output_files.push_back(out);
        for (const auto& [path, data] : extra) {
            write_file(path, data);
            manifest.output_files.push_back(path);
        }
        write_manifest(manifest, out + ".manifest.json");
    }
};

std::string table_bytes(const Table& table, const std::string& format) {
    return format == "json" ? table.to_json() : table.to_csv();
}

Table pmf_table(const IntegerPmf& pmf, const std::string& value_column) {
    Table table({value_column, "prob_num", "prob_den", "prob_float"});
    for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
        const Rational& q = pmf.probs[i];
        table.add_row({cell(pmf.support_min + static_cast<std::int64_t>(i)),
                       cell(boost::multiprecision::numerator(q)),
                       cell(boost::multiprecision::denominator(q)), cell(to_double(q))});
    }
    return table;
}

Table histogram_table(const EmpiricalDist& hist) {
    const double inv = 1.0 / static_cast<double>(hist.sample_size);
    if (hist.binned) {
        Table table({"bin", "bin_center", "count", "freq"});
        for (std::size_t i = 0; i < hist.counts.size(); ++i) {
            const std::int64_t bin = hist.support_min + static_cast<std::int64_t>(i);
            table.add_row({cell(bin), cell(hist.value_at(bin)), cell(hist.counts[i]),
                           cell(static_cast<double>(hist.counts[i]) * inv)});
        }
        return table;
    }
    Table table({"value", "count", "freq"});
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        table.add_row({cell(hist.support_min + static_cast<std::int64_t>(i)),
                       cell(hist.counts[i]),
                       cell(static_cast<double>(hist.counts[i]) * inv)});
    }
    return table;
}

std::string join_command_line(int argc, char** argv) {
    std::string joined;
    for (int i = 0; i < argc; ++i) {
        if (i) joined += ' ';
        joined += argv[i];
    }
    return joined;
}

// ---- leaf command implementations -----------------------------------------

struct DescentsExactOpts {
    std::int64_t n = 0;
    std::string out;
};

void run_descents_exact(const Context& ctx, const DescentsExactOpts& o) {
    const auto pmf = eulerian_pmf(o.n);
    const std::string config = "descents exact|n=" + std::to_string(o.n);
    ctx.finish(o.out, table_bytes(pmf_table(pmf, "k"), ctx.format), config);
}

struct SampleOpts {
    std::int64_t n = 0;
    std::uint64_t samples = 0;
    std::string out;
    std::string p = "1/2";
    std::int64_t k = -1;
    bool k_all = false;
    double bin_width = 1.0;
    bool allow_composite = false;
};

void run_descents_sample(const Context& ctx, const SampleOpts& o) {
    McStatistic stat;
    stat.kind = McStatistic::Kind::Descents;
    stat.n = o.n;
    const auto hist = mc_histogram(stat, o.samples, ctx.mc_config());
    ctx.finish(o.out, table_bytes(histogram_table(hist), ctx.format),
               stat.config_string(o.samples, ctx.seed, ctx.stream),
               hist.provenance.stream_count);
}

void run_aps_exact(const Context& ctx, const SampleOpts& o) {
    const Rational p = parse_rational(o.p);
    const auto pmf = exhaustive_ap_pmf(o.n, p, o.allow_composite);
    const std::string config =
        "aps exact|n=" + std::to_string(o.n) + "|p=" + to_string(p);
    ctx.finish(o.out, table_bytes(pmf_table(pmf, "value"), ctx.format), config);
}

void run_aps_sample(const Context& ctx, const SampleOpts& o) {
    McStatistic stat;
    stat.kind = McStatistic::Kind::Aps;
    stat.n = o.n;
    stat.p = to_double(parse_rational(o.p));
    const auto hist = mc_histogram(stat, o.samples, ctx.mc_config());
    ctx.finish(o.out, table_bytes(histogram_table(hist), ctx.format),
               stat.config_string(o.samples, ctx.seed, ctx.stream),
               hist.provenance.stream_count);
}

void run_aps_moments(const Context& ctx, const SampleOpts& o) {
    const Rational p = parse_rational(o.p);
    const auto m = ap_moments_unconditional(o.n, p, o.allow_composite);
    std::string json = "{\n";
    json += "  \"n\": " + std::to_string(o.n) + ",\n";
    json += "  \"p\": " + json_rational(p) + ",\n";
    json += "  \"mean\": " + json_rational(m.mean) + ",\n";
    json += "  \"variance\": " + json_rational(m.variance) + ",\n";
    json += "  \"mean_float\": " + format_double(to_double(m.mean)) + ",\n";
    json += "  \"sigma_float\": " +
            format_double(std::sqrt(to_double(m.variance))) + ",\n";
    json += "  \"exact\": true,\n";
    json += std::string("  \"formula_safe\": ") + (m.formula_safe ? "true" : "false") +
            "\n}\n";
    ctx.finish(o.out, json, "aps moments|n=" + std::to_string(o.n) + "|p=" + to_string(p));
}

void run_conditional_exact(const Context& ctx, const SampleOpts& o) {
    if (o.k < 0) throw domain_error("conditional exact: --k is required");
    const auto pmf = exhaustive_conditional_pmf(o.n, o.k, o.allow_composite);
    const std::string config =
        "conditional exact|n=" + std::to_string(o.n) + "|k=" + std::to_string(o.k);
    ctx.finish(o.out, table_bytes(pmf_table(pmf, "value"), ctx.format), config);
}

void run_conditional_sample(const Context& ctx, const SampleOpts& o) {
    if (!o.k_all && o.k < 0)
        throw domain_error("conditional sample: pass --k or --k-all");
    // Per-k sub-experiments get disjoint stream ranges.
    constexpr std::uint64_t kStreamStride = 1ull << 20;
    std::vector<std::int64_t> ks;
    if (o.k_all)
        for (std::int64_t k = 0; k <= o.n; ++k) ks.push_back(k);
    else
        ks.push_back(o.k);

    Table table({"k", "value", "count", "freq"});
    for (std::size_t i = 0; i < ks.size(); ++i) {
        McStatistic stat;
        stat.kind = McStatistic::Kind::ApsFixedK;
        stat.n = o.n;
        stat.k = ks[i];
        McConfig cfg = ctx.mc_config();
        cfg.stream_base = ctx.stream + static_cast<std::uint64_t>(i) * kStreamStride;
        const auto hist = mc_histogram(stat, o.samples, cfg);
        const double inv = 1.0 / static_cast<double>(hist.sample_size);
        for (std::size_t j = 0; j < hist.counts.size(); ++j) {
            if (hist.counts[j] == 0) continue;
            table.add_row({cell(ks[i]),
                           cell(hist.support_min + static_cast<std::int64_t>(j)),
                           cell(hist.counts[j]),
                           cell(static_cast<double>(hist.counts[j]) * inv)});
        }
    }
    const std::string config = "conditional sample|n=" + std::to_string(o.n) + "|k=" +
                               (o.k_all ? "all" : std::to_string(o.k)) +
                               "|samples=" + std::to_string(o.samples) +
                               "|seed=" + std::to_string(ctx.seed) +
                               "|stream=" + std::to_string(ctx.stream);
    ctx.finish(o.out, table_bytes(table, ctx.format), config,
               static_cast<std::uint64_t>(ks.size()) * kStreamStride);
}

void run_conditional_moments(const Context& ctx, const SampleOpts& o) {
    std::vector<std::int64_t> ks;
    if (o.k_all)
        for (std::int64_t k = 0; k <= o.n; ++k) ks.push_back(k);
    else if (o.k >= 0)
        ks.push_back(o.k);
    else
        throw domain_error("conditional moments: pass --k or --k-all");

    Table table({"k", "mean_num", "mean_den", "var_num", "var_den", "sigma_float",
                 "leading_num", "leading_den"});
    for (const std::int64_t k : ks) {
        const auto m = ap_moments_conditional(o.n, k, o.allow_composite);
        const Cell var_num = m.variance
                                 ? cell(boost::multiprecision::numerator(*m.variance))
                                 : cell(std::string(""));
        const Cell var_den = m.variance
                                 ? cell(boost::multiprecision::denominator(*m.variance))
                                 : cell(std::string(""));
        const Cell sigma = m.variance ? cell(std::sqrt(to_double(*m.variance)))
                                      : cell(std::string(""));
        table.add_row({cell(k), cell(boost::multiprecision::numerator(m.mean)),
                       cell(boost::multiprecision::denominator(m.mean)), var_num, var_den,
                       sigma, cell(boost::multiprecision::numerator(m.variance_leading)),
                       cell(boost::multiprecision::denominator(m.variance_leading))});
    }
    const std::string config = "conditional moments|n=" + std::to_string(o.n) + "|k=" +
                               (o.k_all ? "all" : std::to_string(o.k));
    ctx.finish(o.out, table_bytes(table, ctx.format), config);
}

void run_continuous_sample(const Context& ctx, const SampleOpts& o) {
    McStatistic stat;
    stat.kind = McStatistic::Kind::ApsContinuous;
    stat.n = o.n;
    stat.bin_width = o.bin_width;
    const auto hist = mc_histogram(stat, o.samples, ctx.mc_config());

    // The variance-discrepancy report rides along as a sidecar JSON.
    const auto m = ap_moments_continuous(o.n, o.allow_composite);
    std::string report = "{\n";
    report += "  \"n\": " + std::to_string(o.n) + ",\n";
    report += "  \"mean\": " + json_rational(m.mean) + ",\n";
    report += "  \"variance_closed_form\": " + json_rational(m.variance_closed_form) + ",\n";
    report += "  \"variance_moment_oracle\": " + json_rational(m.variance_from_moments) + ",\n";
    report += "  \"variance_ratio_moments_over_closed\": " +
              format_double(to_double(m.variance_from_moments) / to_double(m.variance_closed_form)) +
              ",\n";
    report += std::string("  \"forms_agree\": ") + (m.agree() ? "true" : "false") + "\n}\n";

    ctx.finish(o.out, table_bytes(histogram_table(hist), ctx.format),
               stat.config_string(o.samples, ctx.seed, ctx.stream),
               hist.provenance.stream_count, {{o.out + ".moments.json", report}});
}

void run_continuous_moments(const Context& ctx, const SampleOpts& o) {
    const auto m = ap_moments_continuous(o.n, o.allow_composite);
    std::string json = "{\n";
    json += "  \"n\": " + std::to_string(o.n) + ",\n";
    json += "  \"mean\": " + json_rational(m.mean) + ",\n";
    json += "  \"variance_closed_form\": " + json_rational(m.variance_closed_form) + ",\n";
    json += "  \"variance_moment_oracle\": " + json_rational(m.variance_from_moments) + ",\n";
    json += "  \"variance_ratio_moments_over_closed\": " +
            format_double(to_double(m.variance_from_moments) / to_double(m.variance_closed_form)) +
            ",\n";
    json += std::string("  \"forms_agree\": ") + (m.agree() ? "true" : "false") + "\n}\n";
    ctx.finish(o.out, json, "continuous moments|n=" + std::to_string(o.n));
}

struct IdentityOpts {
    std::int64_t n = 0;
    std::string out;
};

void run_identities_complement(const Context& ctx, const IdentityOpts& o) {
    Table table({"k", "value_num", "value_den"});
    for (std::int64_t k = 0; k <= o.n; ++k) {
        const Rational v = complement_identity(o.n, k);
        table.add_row({cell(k), cell(boost::multiprecision::numerator(v)),
                       cell(boost::multiprecision::denominator(v))});
    }
    ctx.finish(o.out, table_bytes(table, ctx.format),
               "identities complement|n=" + std::to_string(o.n));
}

void run_identities_intersections(const Context& ctx, const IdentityOpts& o) {
    const auto t = intersection_table(o.n);
    Table table({"overlap", "count"});
    for (int i = 0; i < 4; ++i) table.add_row({cell(std::int64_t(i)), cell(t.counts[i])});
    ctx.finish(o.out, table_bytes(table, ctx.format),
               "identities intersections|n=" + std::to_string(o.n));
}

void run_identities_extension(const Context& ctx, const IdentityOpts& o) {
    Table table({"i", "count"});
    for (int i = 0; i <= 3; ++i)
        table.add_row({cell(std::int64_t(i)), cell(extension_count(o.n, i))});
    ctx.finish(o.out, table_bytes(table, ctx.format),
               "identities extension|n=" + std::to_string(o.n));
}

struct SteinOpts {
    std::int64_t n = 0;
    std::int64_t k = -1;
    std::int64_t x = 0;
    std::int64_t k_lo = -1, k_hi = -1;
    std::uint64_t samples = 0;
    std::string n_list;
    std::string p = "1/2";
    std::string out;
    bool exact = false;
    bool exact_degree = false;
    bool relaxed_moments = false;
};

std::vector<std::int64_t> parse_n_list(const std::string& list) {
    std::vector<std::int64_t> ns;
    std::size_t pos = 0;
    while (pos < list.size()) {
        const std::size_t comma = list.find(',', pos);
        const std::string tok = list.substr(pos, comma == std::string::npos
                                                     ? std::string::npos
                                                     : comma - pos);
        if (!tok.empty()) ns.push_back(std::stoll(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return ns;
}

void run_stein_depgraph(const Context& ctx, const SteinOpts& o) {
    const auto g = dependency_graph(o.n);
    std::string json = "{\n";
    json += "  \"n\": " + std::to_string(g.n) + ",\n";
    json += "  \"vertex_count\": " + std::to_string(g.vertex_count) + ",\n";
    json += "  \"max_degree\": " + std::to_string(g.max_degree) + ",\n";
    json += "  \"d\": " + std::to_string(g.d_value) + ",\n";
    json += "  \"degree_bound\": " + std::to_string(9 * (o.n - 1) / 2) + ",\n";
    json += std::string("  \"bound_holds\": ") +
            (g.max_degree <= 9 * (o.n - 1) / 2 ? "true" : "false") + "\n}\n";
    ctx.finish(o.out, json, "stein depgraph|n=" + std::to_string(o.n));
}

void run_stein_bound(const Context& ctx, const SteinOpts& o) {
    const auto ns = parse_n_list(o.n_list);
    if (ns.empty()) throw domain_error("stein bound: --n-list is empty");
    const Rational p = parse_rational(o.p);
    Table table({"n", "d", "d_exact", "sigma", "sum_m3", "sum_m4", "wasserstein",
                 "kolmogorov"});
    for (const std::int64_t n : ns) {
        const auto b = chatterjee_bound(n, p, !o.relaxed_moments, o.exact_degree);
        table.add_row({cell(n), cell(b.d_value), cell(std::string(b.d_exact ? "1" : "0")),
                       cell(b.sigma), cell(b.sum_abs_m3), cell(b.sum_abs_m4),
                       cell(b.wasserstein), cell(b.kolmogorov)});
    }
    ctx.finish(o.out, table_bytes(table, ctx.format),
               "stein bound|n-list=" + o.n_list + "|p=" + to_string(p));
}

void run_stein_exchangeable(const Context& ctx, const SteinOpts& o) {
    if (o.k < 0) throw domain_error("stein exchangeable: --k is required");
    ExchangeableReport r;
    if (o.samples > 0) {
        RngStream rng(ctx.seed, ctx.stream);
        r = exchangeable_verify_mc(o.n, o.k, o.samples, rng);
    } else {
        r = exchangeable_verify(o.n, o.k);
    }
    std::string json = "{\n";
    json += "  \"n\": " + std::to_string(r.n) + ",\n";
    json += "  \"k\": " + std::to_string(r.k) + ",\n";
    json += "  \"lambda_effective\": " + json_rational(r.lambda_effective) + ",\n";
    json += "  \"lambda_stated\": " + json_rational(r.lambda_stated) + ",\n";
    json += "  \"mean\": " + json_rational(r.mean) + ",\n";
    json += "  \"max_residual\": " + json_rational(r.max_residual) + ",\n";
    json += "  \"max_residual_stated\": " + json_rational(r.max_residual_stated) + ",\n";
    json += "  \"subsets_checked\": " + std::to_string(r.subsets_checked) + ",\n";
    json += std::string("  \"exhaustive\": ") + (r.exhaustive ? "true" : "false") + "\n}\n";
    ctx.finish(o.out, json,
               "stein exchangeable|n=" + std::to_string(o.n) + "|k=" +
                   std::to_string(o.k) + "|samples=" + std::to_string(o.samples));
}

void run_stein_spacing(const Context& ctx, const SteinOpts& o) {
    const std::int64_t lo = o.k_lo >= 0 ? o.k_lo : 3;
    const std::int64_t hi = o.k_hi >= 0 ? o.k_hi : o.n - 3;
    const auto profile = spacing_profile(o.n, lo, hi);
    Table table({"k", "gap_num", "gap_den", "sigma", "ratio"});
    for (std::size_t i = 0; i < profile.ks.size(); ++i) {
        table.add_row({cell(profile.ks[i]),
                       cell(boost::multiprecision::numerator(profile.gaps[i])),
                       cell(boost::multiprecision::denominator(profile.gaps[i])),
                       cell(profile.sigmas[i]), cell(profile.ratios[i])});
    }
    ctx.finish(o.out, table_bytes(table, ctx.format),
               "stein spacing|n=" + std::to_string(o.n) + "|k=" + std::to_string(lo) +
                   ".." + std::to_string(hi));
}

void run_stein_gap(const Context& ctx, const SteinOpts& o) {
    const auto diag = gap_diagnostic(o.n, o.x);
    std::string json = "{\n";
    json += "  \"n\": " + std::to_string(diag.n) + ",\n";
    json += "  \"x\": " + std::to_string(diag.x) + ",\n";
    json += "  \"chebyshev_bound\": " + format_double(diag.chebyshev_bound) + ",\n";
    json += "  \"gaussian_form_bound\": " + format_double(diag.gaussian_form_bound) + ",\n";
    json += "  \"gaussian_height\": " + format_double(diag.gaussian_height) + ",\n";
    json += "  \"terms\": [";
    for (std::size_t k = 0; k < diag.terms.size(); ++k) {
        if (k) json += ", ";
        json += format_double(diag.terms[k]);
    }
    json += "]\n}\n";
    ctx.finish(o.out, json,
               "stein gap|n=" + std::to_string(o.n) + "|x=" + std::to_string(o.x));
}

void run_stein_peak(const Context& ctx, const SteinOpts& o) {
    PeakHeightReport r;
    if (o.exact)
        r = peak_height_exact(o.n);
    else if (o.samples > 0)
        r = peak_height_check(o.n, o.samples, ctx.mc_config());
    else
        throw domain_error("stein peak: pass --samples or --exact");
    std::string json = "{\n";
    json += "  \"n\": " + std::to_string(r.n) + ",\n";
    json += "  \"k\": " + std::to_string(r.k) + ",\n";
    json += "  \"x\": " + std::to_string(r.x) + ",\n";
    json += "  \"p_hat\": " + format_double(r.p_hat) + ",\n";
    json += "  \"ci_half_width\": " + format_double(r.ci_half_width) + ",\n";
    json += std::string("  \"low_count_warning\": ") +
            (r.low_count_warning ? "true" : "false") + ",\n";
    json += "  \"scaled_peak\": " + format_double(r.scaled_peak) + ",\n";
    json += "  \"predicted_constant\": " + format_double(r.predicted_constant) + ",\n";
    json += "  \"gaussian_ceiling\": " + format_double(r.gaussian_ceiling) + "\n}\n";
    ctx.finish(o.out, json,
               "stein peak|n=" + std::to_string(o.n) + "|samples=" +
                   std::to_string(o.samples) + "|exact=" + (o.exact ? "1" : "0"));
}

struct MetricsOpts {
    std::string source = "descents";
    std::int64_t n = 0;
    std::string p = "1/2";
    double t_max = 3.0;
    int t_steps = 200;
    bool raw_support = false;  // charfn without standardization
    std::string out;
};

IntegerPmf source_pmf(const MetricsOpts& o) {
    if (o.source == "descents") return eulerian_pmf(o.n);
    if (o.source == "aps") return exhaustive_ap_pmf(o.n, parse_rational(o.p));
    throw domain_error("unknown source: " + o.source + " (expected descents|aps)");
}

GaussianRef matched_gaussian(const IntegerPmf& pmf) {
    return {to_double(pmf.mean()), std::sqrt(to_double(pmf.variance()))};
}

void run_metrics_llt(const Context& ctx, const MetricsOpts& o) {
    const auto pmf = source_pmf(o);
    const auto ref = matched_gaussian(pmf);
    const auto err = llt_error(pmf, ref);
    std::string json = "{\n";
    json += "  \"source\": \"" + o.source + "\",\n";
    json += "  \"n\": " + std::to_string(o.n) + ",\n";
    json += "  \"mean\": " + format_double(ref.mean) + ",\n";
    json += "  \"sigma\": " + format_double(ref.sigma) + ",\n";
    json += "  \"raw\": " + format_double(err.raw) + ",\n";
    json += "  \"scaled\": " + format_double(err.scaled) + "\n}\n";
    ctx.finish(o.out, json,
               "metrics llt|source=" + o.source + "|n=" + std::to_string(o.n));
}

void run_metrics_kolm(const Context& ctx, const MetricsOpts& o) {
    const auto pmf = source_pmf(o);
    const auto z = LatticeDist::from_pmf(pmf).standardized();
    const GaussianRef ref{0.0, 1.0};
    const double kolm = kolmogorov(z, ref);
    const double wass = wasserstein(z, ref);
    std::string json = "{\n";
    json += "  \"source\": \"" + o.source + "\",\n";
    json += "  \"n\": " + std::to_string(o.n) + ",\n";
    json += "  \"kolmogorov\": " + format_double(kolm) + ",\n";
    json += "  \"wasserstein\": " + format_double(wass) + ",\n";
    json += std::string("  \"kolm_le_sqrt_2_over_pi_wass\": ") +
            (kolm <= std::sqrt(2.0 / 3.141592653589793 * wass) + 1e-12 ? "true"
                                                                       : "false") +
            "\n}\n";
    ctx.finish(o.out, json,
               "metrics kolm|source=" + o.source + "|n=" + std::to_string(o.n));
}

void run_metrics_charfn(const Context& ctx, const MetricsOpts& o) {
    const auto pmf = source_pmf(o);
    const auto dist = LatticeDist::from_pmf(pmf);
    if (o.t_steps < 1) throw domain_error("metrics charfn: --t-steps must be >= 1");
    std::vector<double> grid(static_cast<std::size_t>(2 * o.t_steps + 1));
    for (int i = -o.t_steps; i <= o.t_steps; ++i)
        grid[static_cast<std::size_t>(i + o.t_steps)] =
            o.t_max * static_cast<double>(i) / o.t_steps;
    const auto profile = char_fn(dist, !o.raw_support, grid);
    Table table({"t", "re_phi", "im_phi", "gauss", "abs_diff"});
    for (std::size_t j = 0; j < grid.size(); ++j) {
        table.add_row({cell(profile.t_grid[j]), cell(profile.phi[j].real()),
                       cell(profile.phi[j].imag()), cell(profile.gauss_ref[j]),
                       cell(profile.abs_diff[j])});
    }
    ctx.finish(o.out, table_bytes(table, ctx.format),
               "metrics charfn|source=" + o.source + "|n=" + std::to_string(o.n) +
                   "|t-max=" + format_double(o.t_max) +
                   "|t-steps=" + std::to_string(o.t_steps) +
                   "|standardize=" + (o.raw_support ? "0" : "1"));
}

void run_metrics_invert(const Context& ctx, const MetricsOpts& o) {
    const auto pmf = source_pmf(o);
    const auto dist = LatticeDist::from_pmf(pmf);
    const double m2 = to_double(pmf.variance() + pmf.mean() * pmf.mean());
    const auto grid = inversion_grid(1.0, m2);
    const auto profile = char_fn(dist, false, grid);
    Table table({"y", "exact_num", "exact_den", "recovered", "abs_err"});
    double worst = 0.0;
    for (std::int64_t y = pmf.support_min; y <= pmf.support_max(); ++y) {
        const double recovered = fourier_invert(profile, 0.0, 1.0, static_cast<double>(y));
        const Rational& exact = pmf.probs[static_cast<std::size_t>(y - pmf.support_min)];
        const double err = std::abs(recovered - to_double(exact));
        worst = std::max(worst, err);
        table.add_row({cell(y), cell(boost::multiprecision::numerator(exact)),
                       cell(boost::multiprecision::denominator(exact)), cell(recovered),
                       cell(err)});
    }
    std::printf("max_abs_err=%s grid_points=%zu step=%s\n", format_double(worst).c_str(),
                grid.size(), format_double(grid[1] - grid[0]).c_str());
    ctx.finish(o.out, table_bytes(table, ctx.format),
               "metrics invert|source=" + o.source + "|n=" + std::to_string(o.n) +
                   "|grid=" + std::to_string(grid.size()));
}

void run_metrics_envelope(const Context& ctx, const MetricsOpts& o) {
    if (o.t_steps < 1) throw domain_error("metrics envelope: --t-steps must be >= 1");
    std::vector<double> grid;
    const double t_max = std::sqrt(static_cast<double>(o.n)) / 4.0;
    for (int i = 1; i <= o.t_steps; ++i)
        grid.push_back(t_max * static_cast<double>(i) / o.t_steps);
    const auto report = small_t_envelope(o.n, grid);
    Table table({"t", "abs_diff", "envelope", "ratio"});
    for (const auto& point : report.points)
        table.add_row({cell(point.t), cell(point.abs_diff), cell(point.envelope),
                       cell(point.abs_diff / point.envelope)});
    std::printf("fitted_c=%s\n", format_double(report.fitted_c).c_str());
    ctx.finish(o.out, table_bytes(table, ctx.format),
               "metrics envelope|n=" + std::to_string(o.n) +
                   "|t-steps=" + std::to_string(o.t_steps));
}

struct ScanOpts {
    std::string metric;
    std::string n_list;
    std::string p = "1/2";
    std::uint64_t samples = 100'000;
    std::string out;
};

double scan_metric_at(const ScanOpts& o, const Context& ctx, std::int64_t n,
                      double& noise_floor) {
    noise_floor = 0.0;
    if (o.metric == "descents-llt-raw" || o.metric == "descents-llt-scaled") {
        const auto pmf = eulerian_pmf(n);
        const auto err = llt_error(pmf, matched_gaussian(pmf));
        return o.metric == "descents-llt-raw" ? err.raw : err.scaled;
    }
    if (o.metric == "ap-llt-scaled") {
        const auto pmf = exhaustive_ap_pmf(n, parse_rational(o.p));
        return llt_error(pmf, matched_gaussian(pmf)).scaled;
    }
    if (o.metric == "ap-kolm-exact") {
        const auto pmf = exhaustive_ap_pmf(n, parse_rational(o.p));
        return kolmogorov(LatticeDist::from_pmf(pmf).standardized(), GaussianRef{0.0, 1.0});
    }
    if (o.metric == "chatterjee-kolm")
        return chatterjee_bound(n, parse_rational(o.p)).kolmogorov;
    if (o.metric == "descents-llt-mc") {
        McStatistic stat;
        stat.kind = McStatistic::Kind::Descents;
        stat.n = n;
        const auto hist = mc_histogram(stat, o.samples, ctx.mc_config());
        const auto m = descent_moments(n);
        const GaussianRef ref{to_double(m.mean), std::sqrt(to_double(m.variance))};
        noise_floor = std::sqrt(1.0 / static_cast<double>(o.samples));
        return llt_error(hist, ref).raw;
    }
    throw domain_error("unknown scan metric: " + o.metric);
}

void run_scan(const Context& ctx, const ScanOpts& o, Context& mutable_ctx) {
    const auto ns = parse_n_list(o.n_list);
    if (ns.size() < 3)
        throw CLI::ValidationError("--n-list", "need at least 3 values of n");

    Table table({"n", "metric", "noise_floor"});
    std::vector<double> fit_n, fit_m, floors;
    bool partial = false;
    for (const std::int64_t n : ns) {
        try {
            double floor = 0.0;
            const double value = scan_metric_at(o, ctx, n, floor);
            table.add_row({cell(n), cell(value), cell(floor)});
            fit_n.push_back(static_cast<double>(n));
            fit_m.push_back(value);
            floors.push_back(floor);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "scan: n=%lld failed: %s\n",
                         static_cast<long long>(n), e.what());
            partial = true;
        }
    }

    std::string fit_json = "{\n  \"metric\": \"" + o.metric + "\",\n";
    if (fit_n.size() >= 3) {
        const auto fit = fit_loglog(fit_n, fit_m);
        fit_json += "  \"slope\": " + format_double(fit.slope) + ",\n";
        fit_json += "  \"stderr\": " + format_double(fit.stderr_slope) + ",\n";
        fit_json += "  \"intercept\": " + format_double(fit.intercept) + ",\n";
    } else {
        fit_json += "  \"slope\": null,\n  \"stderr\": null,\n  \"intercept\": null,\n";
    }
    fit_json += "  \"points\": " + std::to_string(fit_n.size()) + ",\n";
    fit_json += std::string("  \"partial\": ") + (partial ? "true" : "false") + "\n}\n";

    ctx.finish(o.out, table_bytes(table, ctx.format),
               "scan|metric=" + o.metric + "|n-list=" + o.n_list +
                   "|samples=" + std::to_string(o.samples) +
                   "|seed=" + std::to_string(ctx.seed),
               0, {{o.out + ".fit.json", fit_json}});
    if (partial) mutable_ctx.exit_code = kExitPartial;
}

// ---- wiring ----------------------------------------------------------------

void add_common_output(CLI::App* cmd, std::string& out) {
    cmd->add_option("--out", out, "output path (data file; a .manifest.json rides along)")
        ->required();
}

}  // namespace

int run_cli(int argc, char** argv) {
    Context ctx;
    ctx.command_line = join_command_line(argc, argv);
    ctx.seed = default_seed();
    ctx.workers = default_workers();

    CLI::App app{"limitlab: exact and Monte Carlo experiments on descent and 3-AP counts"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // Global knobs; every subcommand may use them.
    app.add_option("--seed", ctx.seed,
                   "PRNG seed (default: LIMITLAB_SEED env var, else 0)");
    app.add_option("--stream", ctx.stream, "base stream id (default 0)");
    app.add_option("--workers", ctx.workers, "worker-thread cap (default: cores)");
    app.add_option("--format", ctx.format, "data format: csv or json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));

    // descents
    auto* descents = app.add_subcommand("descents", "descent-count distributions");
    descents->require_subcommand(1);
    {
        auto opts = std::make_shared<DescentsExactOpts>();
        auto* exact = descents->add_subcommand("exact", "exact descent pmf");
        exact->add_option("--n", opts->n, "permutation size")->required();
        add_common_output(exact, opts->out);
        exact->callback([&ctx, opts] { run_descents_exact(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* sample = descents->add_subcommand("sample", "Monte Carlo descent histogram");
        sample->add_option("--n", opts->n, "permutation size")->required();
        sample->add_option("--samples", opts->samples, "sample count")->required();
        add_common_output(sample, opts->out);
        sample->callback([&ctx, opts] { run_descents_sample(ctx, *opts); });
    }

    // aps
    auto* aps = app.add_subcommand("aps", "3-AP counts of Bernoulli(p) subsets");
    aps->require_subcommand(1);
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* exact = aps->add_subcommand("exact", "exhaustive pmf (n <= 25)");
        exact->add_option("--n", opts->n, "modulus (odd prime)")->required();
        exact->add_option("--p", opts->p, "membership probability (rational, default 1/2)");
        exact->add_flag("--allow-composite", opts->allow_composite,
                        "permit composite n (formula-unsafe)");
        add_common_output(exact, opts->out);
        exact->callback([&ctx, opts] { run_aps_exact(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* sample = aps->add_subcommand("sample", "Monte Carlo 3-AP histogram");
        sample->add_option("--n", opts->n, "modulus (odd)")->required();
        sample->add_option("--p", opts->p, "membership probability (default 1/2)");
        sample->add_option("--samples", opts->samples, "sample count")->required();
        add_common_output(sample, opts->out);
        sample->callback([&ctx, opts] { run_aps_sample(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* moments = aps->add_subcommand("moments", "exact mean/variance");
        moments->add_option("--n", opts->n, "modulus")->required();
        moments->add_option("--p", opts->p, "membership probability (default 1/2)");
        moments->add_flag("--allow-composite", opts->allow_composite,
                          "permit composite n (formula-unsafe)");
        add_common_output(moments, opts->out);
        moments->callback([&ctx, opts] { run_aps_moments(ctx, *opts); });
    }

    // conditional
    auto* conditional =
        app.add_subcommand("conditional", "3-AP counts conditioned on subset size");
    conditional->require_subcommand(1);
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* exact = conditional->add_subcommand("exact", "exhaustive conditional pmf");
        exact->add_option("--n", opts->n, "modulus (odd prime)")->required();
        exact->add_option("--k", opts->k, "subset size")->required();
        exact->add_flag("--allow-composite", opts->allow_composite,
                        "permit composite n (formula-unsafe)");
        add_common_output(exact, opts->out);
        exact->callback([&ctx, opts] { run_conditional_exact(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* sample =
            conditional->add_subcommand("sample", "Monte Carlo histograms per size");
        sample->add_option("--n", opts->n, "modulus (odd)")->required();
        sample->add_option("--k", opts->k, "subset size");
        sample->add_flag("--k-all", opts->k_all, "sweep every k in 0..n");
        sample->add_option("--samples", opts->samples, "samples per k")->required();
        add_common_output(sample, opts->out);
        sample->callback([&ctx, opts] { run_conditional_sample(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* moments = conditional->add_subcommand("moments", "closed-form moments per size");
        moments->add_option("--n", opts->n, "modulus (odd prime)")->required();
        moments->add_option("--k", opts->k, "subset size");
        moments->add_flag("--k-all", opts->k_all, "all k in 0..n");
        moments->add_flag("--allow-composite", opts->allow_composite,
                          "permit composite n (formula-unsafe)");
        add_common_output(moments, opts->out);
        moments->callback([&ctx, opts] { run_conditional_moments(ctx, *opts); });
    }

    // continuous
    auto* continuous =
        app.add_subcommand("continuous", "continuous-weight 3-AP statistic");
    continuous->require_subcommand(1);
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* sample = continuous->add_subcommand("sample", "binned Monte Carlo histogram");
        sample->add_option("--n", opts->n, "modulus (odd prime)")->required();
        sample->add_option("--samples", opts->samples, "sample count")->required();
        sample->add_option("--bin-width", opts->bin_width, "histogram bin width (default 1)");
        sample->add_flag("--allow-composite", opts->allow_composite,
                         "permit composite n (formula-unsafe)");
        add_common_output(sample, opts->out);
        sample->callback([&ctx, opts] { run_continuous_sample(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SampleOpts>();
        auto* moments = continuous->add_subcommand(
            "moments", "mean plus both variance forms (they disagree; both reported)");
        moments->add_option("--n", opts->n, "modulus (odd prime)")->required();
        moments->add_flag("--allow-composite", opts->allow_composite,
                          "permit composite n (formula-unsafe)");
        add_common_output(moments, opts->out);
        moments->callback([&ctx, opts] { run_continuous_moments(ctx, *opts); });
    }

    // identities
    auto* identities = app.add_subcommand("identities", "exact combinatorial identities");
    identities->require_subcommand(1);
    {
        auto opts = std::make_shared<IdentityOpts>();
        auto* cmd = identities->add_subcommand("complement",
                                               "A(S) + A(S^c) constant per size");
        cmd->add_option("--n", opts->n, "odd modulus > 3")->required();
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_identities_complement(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<IdentityOpts>();
        auto* cmd = identities->add_subcommand("intersections",
                                               "ordered triple-pair overlap counts");
        cmd->add_option("--n", opts->n, "odd prime >= 5")->required();
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_identities_intersections(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<IdentityOpts>();
        auto* cmd = identities->add_subcommand("extension",
                                               "triples through a fixed i-subset");
        cmd->add_option("--n", opts->n, "odd prime")->required();
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_identities_extension(ctx, *opts); });
    }

    // stein
    auto* stein = app.add_subcommand("stein", "Stein-method diagnostics");
    stein->require_subcommand(1);
    {
        auto opts = std::make_shared<SteinOpts>();
        auto* cmd = stein->add_subcommand("depgraph", "exact dependency-graph degree");
        cmd->add_option("--n", opts->n, "odd prime <= 200")->required();
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_stein_depgraph(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SteinOpts>();
        auto* cmd = stein->add_subcommand("bound", "dependency-graph Wasserstein bound");
        cmd->add_option("--n-list", opts->n_list, "comma-separated odd primes")->required();
        cmd->add_option("--p", opts->p, "membership probability (default 1/2)");
        cmd->add_flag("--exact-degree", opts->exact_degree,
                      "use the brute-force max degree instead of (9/2)(n-1)+1");
        cmd->add_flag("--relaxed-moments", opts->relaxed_moments,
                      "use the E|X|^m <= 1 relaxation");
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_stein_bound(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SteinOpts>();
        auto* cmd = stein->add_subcommand("exchangeable",
                                          "swap-pair linear regression identity");
        cmd->add_option("--n", opts->n, "odd prime")->required();
        cmd->add_option("--k", opts->k, "subset size")->required();
        cmd->add_option("--samples", opts->samples,
                        "Monte Carlo subset draws (0 = exhaustive)");
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_stein_exchangeable(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SteinOpts>();
        auto* cmd = stein->add_subcommand("spacing", "conditional mean gaps vs sigmas");
        cmd->add_option("--n", opts->n, "odd prime")->required();
        cmd->add_option("--k-lo", opts->k_lo, "first k (default 3)");
        cmd->add_option("--k-hi", opts->k_hi, "last k (default n-3)");
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_stein_spacing(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SteinOpts>();
        auto* cmd = stein->add_subcommand("gap", "mixture bound on P(A_n = x)");
        cmd->add_option("--n", opts->n, "odd prime >= 7")->required();
        cmd->add_option("--x", opts->x, "integer point")->required();
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_stein_gap(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<SteinOpts>();
        auto* cmd = stein->add_subcommand("peak", "mixture-peak height check");
        cmd->add_option("--n", opts->n, "odd prime")->required();
        cmd->add_option("--samples", opts->samples, "Monte Carlo sample count");
        cmd->add_flag("--exact", opts->exact, "use the exhaustive pmf (n <= 25)");
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_stein_peak(ctx, *opts); });
    }

    // metrics
    auto* metrics = app.add_subcommand("metrics", "limit-theorem distance metrics");
    metrics->require_subcommand(1);
    auto add_source = [](CLI::App* cmd, MetricsOpts& o) {
        cmd->add_option("--source", o.source, "descents | aps (default descents)")
            ->check(CLI::IsMember({"descents", "aps"}));
        cmd->add_option("--n", o.n, "distribution size")->required();
        cmd->add_option("--p", o.p, "membership probability for aps (default 1/2)");
    };
    {
        auto opts = std::make_shared<MetricsOpts>();
        auto* cmd = metrics->add_subcommand("llt", "pointwise discrete-Gaussian distance");
        add_source(cmd, *opts);
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_metrics_llt(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<MetricsOpts>();
        auto* cmd = metrics->add_subcommand("kolm", "Kolmogorov/Wasserstein vs N(0,1)");
        add_source(cmd, *opts);
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_metrics_kolm(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<MetricsOpts>();
        auto* cmd = metrics->add_subcommand("charfn", "characteristic-function profile");
        add_source(cmd, *opts);
        cmd->add_option("--t-max", opts->t_max, "grid endpoint (default 3)");
        cmd->add_option("--t-steps", opts->t_steps, "steps per side (default 200)");
        cmd->add_flag("--raw-support", opts->raw_support,
                      "evaluate on the raw (unstandardized) support");
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_metrics_charfn(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<MetricsOpts>();
        auto* cmd = metrics->add_subcommand("invert", "Fourier-inversion round trip");
        add_source(cmd, *opts);
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_metrics_invert(ctx, *opts); });
    }
    {
        auto opts = std::make_shared<MetricsOpts>();
        auto* cmd = metrics->add_subcommand("envelope", "small-t characteristic envelope");
        cmd->add_option("--n", opts->n, "odd prime (exhaustive pmf)")->required();
        cmd->add_option("--t-steps", opts->t_steps, "grid points (default 200)");
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_metrics_envelope(ctx, *opts); });
    }

    // scan
    {
        auto opts = std::make_shared<ScanOpts>();
        auto* cmd = app.add_subcommand("scan", "metric-vs-n scaling with a log-log fit");
        cmd->add_option("--metric", opts->metric,
                        "descents-llt-raw | descents-llt-scaled | ap-llt-scaled | "
                        "ap-kolm-exact | chatterjee-kolm | descents-llt-mc")
            ->required();
        cmd->add_option("--n-list", opts->n_list, "comma-separated n values (>= 3)")
            ->required();
        cmd->add_option("--p", opts->p, "membership probability (default 1/2)");
        cmd->add_option("--samples", opts->samples, "samples for Monte Carlo metrics");
        add_common_output(cmd, opts->out);
        cmd->callback([&ctx, opts] { run_scan(ctx, *opts, ctx); });
    }

    // verify
    {
        auto suite = std::make_shared<std::string>();
        auto* cmd = app.add_subcommand("verify", "exhaustive-oracle property suites");
        cmd->add_option("--suite", *suite, "identities | moments | stein | metrics | all")
            ->required();
        cmd->callback([&ctx, suite] {
            if (run_verify_suite(*suite) > 0) ctx.exit_code = kExitPartial;
        });
    }

    // Let --seed/--workers/--format appear after the subcommand tokens.
    auto enable_fallthrough = [](CLI::App* node, auto&& self) -> void {
        for (CLI::App* sub : node->get_subcommands({})) {
            sub->fallthrough(true);
            self(sub, self);
        }
    };
    enable_fallthrough(&app, enable_fallthrough);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const resource_error& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return kExitResource;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return ctx.exit_code;
}

}  // namespace limitlab::cli

int main(int argc, char** argv) { return limitlab::cli::run_cli(argc, argv); }
