#ifndef BIHULL_STUDY_HPP
#define BIHULL_STUDY_HPP

#include <cmath>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bihull/envelopes.hpp"
#include "bihull/families.hpp"
#include "bihull/prng.hpp"

namespace bihull {

struct ClassSpec {
    RelaxClass cls = RelaxClass::M;
    std::optional<int> k;

    std::string name() const { return k ? class_name(cls) + "_" + std::to_string(*k) : class_name(cls); }
};

struct StudyConfig {
    int n = 10;
    double p = 0.5;
    int samples = 100;      // |I| points per graph
    int graphs = 100;       // |F| random graphs
    std::vector<ClassSpec> classes;
    std::uint64_t seed = 1;
    std::uint64_t denominator = 64;  // sample coordinates are k/denominator
    int jobs = 1;
    int envelope_cap = 16;
};

struct StudyRow {
    std::string class_name;
    Rat mu_minus_1;   // mean over graphs of per-graph mean gap ratios, minus 1
    double sigma;     // sample standard deviation of the per-graph means
    Rat c_mean;       // average generator count per graph
};

struct StudyResult {
    std::vector<StudyRow> rows;
    long degenerate_samples = 0;   // skipped because cav == vex
    long sandwich_violations = 0;  // lb_class outside [lb_M, vex] at a sample
};

namespace detail {

struct GraphOutcome {
    std::vector<Rat> class_mean;  // per class, mean gap ratio over usable samples
    std::vector<long> class_sources;
    long degenerate = 0;
    long sandwich_violations = 0;
    bool usable = true;  // false when every sample was degenerate
};

inline GraphOutcome study_one_graph(const StudyConfig& cfg, std::uint64_t graph_seed, std::uint64_t point_seed) {
    GraphOutcome out;
    auto g = erdos_renyi(cfg.n, cfg.p, graph_seed);
    Prng rng(point_seed);
    EnvelopeOptions opts{cfg.envelope_cap};

    std::vector<PointX> points;
    for (int i = 0; i < cfg.samples; ++i)
        points.push_back(PointX(rng.rational_point(static_cast<std::size_t>(cfg.n), cfg.denominator)));

    std::vector<Rat> vex_at, cav_at;
    std::vector<bool> usable(points.size(), false);
    std::size_t usable_count = 0;
    for (const auto& x : points) {
        Rat lo = vex_exact(g, x, opts).first;
        Rat hi = cav_exact(g, x, opts).first;
        if (hi == lo) {
            ++out.degenerate;
        } else {
            ++usable_count;
            usable[vex_at.size()] = true;
        }
        vex_at.push_back(std::move(lo));
        cav_at.push_back(std::move(hi));
    }
    if (usable_count == 0) {
        out.usable = false;
        return out;
    }

    // M bounds are kept for the sandwich check whenever M is requested first
    std::vector<Rat> lb_m(points.size());
    bool have_m = false;

    for (const auto& spec : cfg.classes) {
        auto sys = relaxation_system(g, spec.cls, spec.k);
        out.class_sources.push_back(relaxation_sources(g, spec.cls, spec.k));
        Rat sum = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!usable[i]) continue;
            Rat lb = lb_relax(sys, g, points[i]);
            sum += (cav_at[i] - lb) / (cav_at[i] - vex_at[i]);
            if (lb > vex_at[i]) ++out.sandwich_violations;
            if (spec.cls == RelaxClass::M && !spec.k) {
                lb_m[i] = lb;
                have_m = true;
            } else if (have_m && lb < lb_m[i]) {
                ++out.sandwich_violations;
            }
        }
        out.class_mean.push_back(sum / Rat(static_cast<long>(usable_count)));
    }
    return out;
}

}  // namespace detail

/// Runs the random-graph gap study: |F| graphs, |I| points each, one row per
/// class with the two-level aggregation (means over points, then mean and
/// standard deviation over graphs). Deterministic for a fixed config.
inline StudyResult run_gap_study(const StudyConfig& cfg) {
    if (cfg.classes.empty()) fail(Errc::BadClass, "study needs at least one class");
    if (cfg.samples < 1 || cfg.graphs < 1) fail(Errc::MalformedInstance, "|I| and |F| must be positive");

    Prng master(cfg.seed);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> seeds;
    for (int f = 0; f < cfg.graphs; ++f) {
        std::uint64_t gs = master.derive_seed();
        std::uint64_t ps = master.derive_seed();
        seeds.push_back({gs, ps});
    }

    std::vector<detail::GraphOutcome> outcomes(static_cast<std::size_t>(cfg.graphs));
    if (cfg.jobs <= 1) {
        for (int f = 0; f < cfg.graphs; ++f)
            outcomes[static_cast<std::size_t>(f)] = detail::study_one_graph(cfg, seeds[static_cast<std::size_t>(f)].first,
                                                                            seeds[static_cast<std::size_t>(f)].second);
    } else {
        std::vector<std::future<detail::GraphOutcome>> futures;
        for (int f = 0; f < cfg.graphs; ++f)
            futures.push_back(std::async(std::launch::async, [&cfg, &seeds, f] {
                return detail::study_one_graph(cfg, seeds[static_cast<std::size_t>(f)].first,
                                               seeds[static_cast<std::size_t>(f)].second);
            }));
        for (int f = 0; f < cfg.graphs; ++f) outcomes[static_cast<std::size_t>(f)] = futures[static_cast<std::size_t>(f)].get();
    }

    StudyResult result;
    std::size_t usable_graphs = 0;
    for (const auto& oc : outcomes) {
        result.degenerate_samples += oc.degenerate;
        result.sandwich_violations += oc.sandwich_violations;
        if (oc.usable) ++usable_graphs;
    }
    if (usable_graphs == 0) fail(Errc::DegenerateGap, "every sample point was degenerate");

    for (std::size_t c = 0; c < cfg.classes.size(); ++c) {
        Rat mean = 0, csum = 0;
        for (const auto& oc : outcomes) {
            if (!oc.usable) continue;
            mean += oc.class_mean[c];
            csum += Rat(oc.class_sources[c]);
        }
        mean /= Rat(static_cast<long>(usable_graphs));
        csum /= Rat(static_cast<long>(usable_graphs));

        double sigma = 0;
        if (usable_graphs > 1) {
            double m = mean.get_d();
            double acc = 0;
            for (const auto& oc : outcomes) {
                if (!oc.usable) continue;
                double d = oc.class_mean[c].get_d() - m;
                acc += d * d;
            }
            sigma = std::sqrt(acc / static_cast<double>(usable_graphs - 1));
        }
        result.rows.push_back({cfg.classes[c].name(), Rat(mean - 1), sigma, csum});
    }
    return result;
}

/// CSV mirror of the per-class table: percentages with four decimals.
inline void write_study_csv(std::ostream& os, const StudyResult& res) {
    os << "class,mu_minus_1_pct,sigma_pct,c_P\n";
    for (const auto& row : res.rows) {
        char sigma_buf[64];
        std::snprintf(sigma_buf, sizeof sigma_buf, "%.4f", row.sigma * 100.0);
        os << row.class_name << "," << rat_to_fixed(row.mu_minus_1 * 100, 4) << "," << sigma_buf << ","
           << rat_to_fixed(row.c_mean, 2) << "\n";
    }
}

/// gnuplot-friendly error-bar data: index, class, mu-1 [%], sigma [%], c_P.
inline void write_study_dat(std::ostream& os, const StudyResult& res) {
    os << "# idx class mu_minus_1_pct sigma_pct c_P\n";
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& row = res.rows[i];
        char sigma_buf[64];
        std::snprintf(sigma_buf, sizeof sigma_buf, "%.4f", row.sigma * 100.0);
        os << i + 1 << " " << row.class_name << " " << rat_to_fixed(row.mu_minus_1 * 100, 4) << " " << sigma_buf
           << " " << rat_to_fixed(row.c_mean, 2) << "\n";
    }
}

}  // namespace bihull

#endif
