#include "sigver/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "sigver/errors.hpp"
#include "sigver/projection.hpp"
#include "sigver/rng.hpp"

namespace sigver {

const char* method_name(Method m) {
    switch (m) {
        case Method::baseline: return "baseline";
        case Method::method2: return "method2";
        case Method::length: return "length";
        case Method::shape: return "shape";
        case Method::fused: return "fused";
    }
    return "?";
}

Method parse_method(std::string_view s) {
    for (Method m : all_methods()) {
        if (s == method_name(m)) return m;
    }
    throw InputError("unknown method '" + std::string(s) +
                     "' (expected baseline|method2|length|shape|fused)");
}

std::vector<Method> all_methods() {
    return {Method::baseline, Method::method2, Method::length, Method::shape, Method::fused};
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// FAR/FRR at every distinct pooled score, plus one threshold past the maximum so
// the sweep always reaches (FAR, FRR) = (1, 0).
std::vector<RocPoint> sweep(std::vector<double> genuine, std::vector<double> forgery) {
    if (genuine.empty() || forgery.empty()) {
        throw InputError("score sweep needs non-empty genuine and forgery sets");
    }
    for (double v : genuine) {
        if (!std::isfinite(v)) throw InputError("score sweep: non-finite genuine score");
    }
    for (double v : forgery) {
        if (!std::isfinite(v)) throw InputError("score sweep: non-finite forgery score");
    }
    std::sort(genuine.begin(), genuine.end());
    std::sort(forgery.begin(), forgery.end());

    std::vector<double> thresholds;
    thresholds.reserve(genuine.size() + forgery.size());
    std::merge(genuine.begin(), genuine.end(), forgery.begin(), forgery.end(),
               std::back_inserter(thresholds));
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double ng = static_cast<double>(genuine.size());
    const double nf = static_cast<double>(forgery.size());
    std::vector<RocPoint> points;
    points.reserve(thresholds.size() + 1);
    for (double t : thresholds) {
        const auto below_f = std::lower_bound(forgery.begin(), forgery.end(), t) - forgery.begin();
        const auto below_g = std::lower_bound(genuine.begin(), genuine.end(), t) - genuine.begin();
        points.push_back({t, static_cast<double>(below_f) / nf,
                          (ng - static_cast<double>(below_g)) / ng});
    }
    points.push_back({thresholds.back() + 1.0, 1.0, 0.0});
    return points;
}

}  // namespace

double compute_eer(std::vector<double> genuine_scores, std::vector<double> forgery_scores) {
    const std::vector<RocPoint> pts = sweep(std::move(genuine_scores), std::move(forgery_scores));

    // diff = FAR - FRR is non-decreasing, starting at -1 and ending at +1.
    bool have_zero = false;
    double zero_min = 0.0, zero_max = 0.0;
    for (const RocPoint& p : pts) {
        if (p.far == p.frr) {
            if (!have_zero) {
                zero_min = zero_max = p.far;
                have_zero = true;
            } else {
                zero_min = std::min(zero_min, p.far);
                zero_max = std::max(zero_max, p.far);
            }
        }
    }
    if (have_zero) return 0.5 * (zero_min + zero_max);

    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double d0 = pts[k].far - pts[k].frr;
        const double d1 = pts[k + 1].far - pts[k + 1].frr;
        if (d0 < 0.0 && d1 > 0.0) {
            const double alpha = -d0 / (d1 - d0);
            return pts[k].far + alpha * (pts[k + 1].far - pts[k].far);
        }
    }
    throw ScoringError("compute_eer: no FAR/FRR crossing found");
}

RocCurve roc_from_scores(const std::vector<double>& genuine_scores,
                         const std::vector<double>& forgery_scores, Method method) {
    RocCurve curve;
    curve.method = method;
    curve.points = sweep(genuine_scores, forgery_scores);
    return curve;
}

PreparedCatalog prepare_catalog(const DatasetCatalog& catalog, const PipelineParams& params,
                                ExecMode exec) {
    PreparedCatalog out;
    out.params = params;
    out.signers.resize(catalog.signers.size());

    struct Job {
        const OnlineSignature* sig;
        SignatureFeatures* dst;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < catalog.signers.size(); ++s) {
        const SignerEntry& entry = catalog.signers[s];
        PreparedSigner& ps = out.signers[s];
        ps.signer_id = entry.signer_id;
        ps.genuine.resize(entry.genuine.size());
        ps.forgeries.resize(entry.forgeries.size());
        for (std::size_t i = 0; i < entry.genuine.size(); ++i) {
            jobs.push_back({&entry.genuine[i], &ps.genuine[i]});
        }
        for (std::size_t i = 0; i < entry.forgeries.size(); ++i) {
            jobs.push_back({&entry.forgeries[i], &ps.forgeries[i]});
        }
    }
    parallel_for(jobs.size(), exec, [&](std::size_t k) {
        *jobs[k].dst = extract_features(*jobs[k].sig, params);
    });
    return out;
}

namespace {

bool uses_ucss(const std::vector<Method>& methods) {
    for (Method m : methods) {
        if (m != Method::method2) return true;
    }
    return false;
}

bool contains(const std::vector<Method>& methods, Method m) {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

struct SignerPools {
    // One (genuine, forgery) pool per method, same order as the methods vector.
    std::vector<ScorePool> per_method;
};

SignerPools score_signer(const PreparedSigner& signer, const std::vector<Method>& methods,
                         const ProtocolCounts& counts, std::uint64_t signer_seed, ExecMode exec) {
    const std::size_t need_genuine =
        static_cast<std::size_t>(counts.n_refs) + static_cast<std::size_t>(counts.n_genuine_tests);
    if (signer.genuine.size() < need_genuine ||
        signer.forgeries.size() < static_cast<std::size_t>(counts.n_forgery_tests)) {
        throw ProtocolError("signer " + signer.signer_id + " has too few samples for the protocol (" +
                            std::to_string(signer.genuine.size()) + " genuine, " +
                            std::to_string(signer.forgeries.size()) + " forgeries)");
    }

    Rng rng(signer_seed);
    const std::vector<std::size_t> g_draw = rng.sample_indices(signer.genuine.size(), need_genuine);
    const std::vector<std::size_t> f_draw = rng.sample_indices(
        signer.forgeries.size(), static_cast<std::size_t>(counts.n_forgery_tests));

    EnrollmentOptions opts;
    opts.with_dtw = contains(methods, Method::baseline);
    opts.with_encoded =
        contains(methods, Method::shape) || contains(methods, Method::fused) || contains(methods, Method::length);
    opts.with_length = contains(methods, Method::length) || contains(methods, Method::fused);

    Enrollment enrollment;
    if (uses_ucss(methods)) {
        std::vector<std::vector<Ucss>> ref_segments;
        for (int i = 0; i < counts.n_refs; ++i) {
            ref_segments.push_back(signer.genuine[g_draw[static_cast<std::size_t>(i)]].segments);
        }
        enrollment = make_enrollment(ref_segments, opts, exec);
    }

    ProjectionEnrollment projection;
    if (contains(methods, Method::method2)) {
        std::vector<Profile> ref_profiles;
        for (int i = 0; i < counts.n_refs; ++i) {
            ref_profiles.push_back(signer.genuine[g_draw[static_cast<std::size_t>(i)]].profile);
        }
        projection = make_projection_enrollment(std::move(ref_profiles));
    }

    SignerPools pools;
    pools.per_method.resize(methods.size());

    auto score_one = [&](const SignatureFeatures& test, bool genuine) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            double score = 0.0;
            switch (methods[mi]) {
                case Method::baseline: score = dtw_score(test, enrollment, exec); break;
                case Method::method2: score = projection_score(test.profile, projection); break;
                case Method::length: score = length_score(test, enrollment, exec); break;
                case Method::shape: score = shape_score(test, enrollment, exec); break;
                case Method::fused: score = fused_score(test, enrollment, exec); break;
            }
            (genuine ? pools.per_method[mi].genuine : pools.per_method[mi].forgery).push_back(score);
        }
    };

    for (int i = 0; i < counts.n_genuine_tests; ++i) {
        score_one(signer.genuine[g_draw[static_cast<std::size_t>(counts.n_refs + i)]], true);
    }
    for (int i = 0; i < counts.n_forgery_tests; ++i) {
        score_one(signer.forgeries[f_draw[static_cast<std::size_t>(i)]], false);
    }
    return pools;
}

}  // namespace

ScorePool run_protocol(const PreparedCatalog& cat, const std::vector<Method>& methods,
                       const ProtocolCounts& counts, std::uint64_t seed, ExecMode exec,
                       std::vector<ScorePool>* per_method) {
    if (cat.signers.empty()) throw ProtocolError("catalog has no signers");
    if (methods.empty()) throw InputError("run_protocol: no methods selected");

    std::vector<SignerPools> by_signer(cat.signers.size());
    parallel_for(cat.signers.size(), exec, [&](std::size_t si) {
        // Nested scoring runs serially; the signer loop is the parallel axis here.
        by_signer[si] = score_signer(cat.signers[si], methods, counts, derive_seed(seed, si),
                                     ExecMode::serial);
    });

    std::vector<ScorePool> pooled(methods.size());
    for (const SignerPools& sp : by_signer) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            auto& dst = pooled[mi];
            const auto& src = sp.per_method[mi];
            dst.genuine.insert(dst.genuine.end(), src.genuine.begin(), src.genuine.end());
            dst.forgery.insert(dst.forgery.end(), src.forgery.begin(), src.forgery.end());
        }
    }
    ScorePool first = pooled.front();
    if (per_method) *per_method = std::move(pooled);
    return first;
}

RocCurve run_roc_experiment(const PreparedCatalog& cat, Method method, std::uint64_t seed,
                            const ProtocolCounts& counts, ExecMode exec) {
    std::vector<ScorePool> pools;
    run_protocol(cat, {method}, counts, seed, exec, &pools);
    return roc_from_scores(pools.front().genuine, pools.front().forgery, method);
}

RocCurve run_roc_experiment(const DatasetCatalog& catalog, Method method, std::uint64_t seed,
                            const ProtocolCounts& counts, const PipelineParams& params, ExecMode exec) {
    return run_roc_experiment(prepare_catalog(catalog, params, exec), method, seed, counts, exec);
}

EvalReport run_table1_experiment(const PreparedCatalog& cat, const std::vector<Method>& methods,
                                 int n_trials, std::uint64_t seed, const ProtocolCounts& counts,
                                 ExecMode exec) {
    if (n_trials < 1) throw InputError("run_table1_experiment: need at least 1 trial");

    // trial -> per-method EER
    std::vector<std::vector<double>> eers(static_cast<std::size_t>(n_trials));
    const ExecMode inner = (n_trials > 1) ? ExecMode::serial : exec;
    parallel_for(static_cast<std::size_t>(n_trials), exec, [&](std::size_t trial) {
        std::vector<ScorePool> pools;
        run_protocol(cat, methods, counts, derive_seed(seed, 0x7261696C5F74ULL + trial), inner, &pools);
        std::vector<double>& row = eers[trial];
        row.reserve(methods.size());
        for (const ScorePool& p : pools) row.push_back(compute_eer(p.genuine, p.forgery));
    });

    EvalReport report;
    report.n_trials = n_trials;
    report.seed = seed;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        double mean = 0.0;
        for (int t = 0; t < n_trials; ++t) mean += eers[static_cast<std::size_t>(t)][mi];
        mean /= n_trials;
        double var = 0.0;
        for (int t = 0; t < n_trials; ++t) {
            const double d = eers[static_cast<std::size_t>(t)][mi] - mean;
            var += d * d;
        }
        var /= n_trials;
        report.methods.push_back({methods[mi], mean, std::sqrt(var), n_trials});
    }
    return report;
}

EvalReport run_table1_experiment(const DatasetCatalog& catalog, const std::vector<Method>& methods,
                                 int n_trials, std::uint64_t seed, const ProtocolCounts& counts,
                                 const PipelineParams& params, ExecMode exec) {
    return run_table1_experiment(prepare_catalog(catalog, params, exec), methods, n_trials, seed, counts,
                                 exec);
}

std::string roc_to_csv(const std::vector<RocCurve>& curves) {
    std::string out = "method,threshold,far,frr\n";
    for (const RocCurve& c : curves) {
        for (const RocPoint& p : c.points) {
            out += method_name(c.method);
            out += ',';
            out += format_double(p.threshold);
            out += ',';
            out += format_double(p.far);
            out += ',';
            out += format_double(p.frr);
            out += '\n';
        }
    }
    return out;
}

std::string report_to_csv(const EvalReport& report) {
    std::string out = "method,mean_eer,std_eer,n_trials\n";
    for (const MethodReport& m : report.methods) {
        out += method_name(m.method);
        out += ',';
        out += format_double(m.mean_eer);
        out += ',';
        out += format_double(m.std_eer);
        out += ',';
        out += std::to_string(m.n_trials);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << text;
    if (!out) throw IoError("short write: " + path.string());
}

}  // namespace sigver
