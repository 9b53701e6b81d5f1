#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "sigver/parallel.hpp"
#include "sigver/pipeline.hpp"
#include "sigver/points_io.hpp"
#include "sigver/scoring.hpp"

namespace sigver {

// The five scoring methods compared by the evaluation harness.
enum class Method { baseline, method2, length, shape, fused };

const char* method_name(Method m);
Method parse_method(std::string_view s);
std::vector<Method> all_methods();

struct ProtocolCounts {
    int n_refs = 5;
    int n_genuine_tests = 20;
    int n_forgery_tests = 25;
};

struct RocPoint {
    double threshold = 0.0;
    double far = 0.0;  // fraction of forgery scores accepted (score < threshold)
    double frr = 0.0;  // fraction of genuine scores rejected (score >= threshold)
};

struct RocCurve {
    Method method = Method::shape;
    std::vector<RocPoint> points;  // threshold-ascending; last point is one past the max score
};

// Equal error rate of the accept-iff-score<t rule. FAR/FRR are evaluated at every
// distinct score; the crossing is linearly interpolated between adjacent
// thresholds. When FAR equals FRR at sampled thresholds the (constant) value over
// that plateau is returned.
double compute_eer(std::vector<double> genuine_scores, std::vector<double> forgery_scores);

RocCurve roc_from_scores(const std::vector<double>& genuine_scores,
                         const std::vector<double>& forgery_scores, Method method);

// Catalog with every signature already converted to features, so repeated trials
// only re-draw indices. Conversion is deterministic and parallelizes per sample.
struct PreparedSigner {
    std::string signer_id;
    std::vector<SignatureFeatures> genuine;
    std::vector<SignatureFeatures> forgeries;
};

struct PreparedCatalog {
    std::vector<PreparedSigner> signers;
    PipelineParams params;
};

PreparedCatalog prepare_catalog(const DatasetCatalog& catalog, const PipelineParams& params, ExecMode exec);

// Pooled genuine/forgery scores for one protocol draw (5 refs by default, then
// the stated number of genuine and forged test signatures per signer).
struct ScorePool {
    std::vector<double> genuine;
    std::vector<double> forgery;
};

// One draw per signer, seeded per (seed, signer index); scores pooled globally.
ScorePool run_protocol(const PreparedCatalog& cat, const std::vector<Method>& methods,
                       const ProtocolCounts& counts, std::uint64_t seed, ExecMode exec,
                       std::vector<ScorePool>* per_method);

RocCurve run_roc_experiment(const PreparedCatalog& cat, Method method, std::uint64_t seed,
                            const ProtocolCounts& counts, ExecMode exec);
RocCurve run_roc_experiment(const DatasetCatalog& catalog, Method method, std::uint64_t seed,
                            const ProtocolCounts& counts = {}, const PipelineParams& params = {},
                            ExecMode exec = ExecMode::serial);

struct MethodReport {
    Method method = Method::shape;
    double mean_eer = 0.0;
    double std_eer = 0.0;  // population std over trials
    int n_trials = 0;
};

struct EvalReport {
    std::vector<MethodReport> methods;
    int n_trials = 0;
    std::uint64_t seed = 0;
};

// Repeated random-partition protocol: per trial draw references and test sets,
// compute the pooled EER per method; report mean and std over trials. Trial i uses
// the (seed, i) substream, so results do not depend on the execution mode.
EvalReport run_table1_experiment(const PreparedCatalog& cat, const std::vector<Method>& methods,
                                 int n_trials, std::uint64_t seed, const ProtocolCounts& counts,
                                 ExecMode exec);
EvalReport run_table1_experiment(const DatasetCatalog& catalog, const std::vector<Method>& methods,
                                 int n_trials, std::uint64_t seed,
                                 const ProtocolCounts& counts = {5, 5, 5},
                                 const PipelineParams& params = {}, ExecMode exec = ExecMode::serial);

std::string roc_to_csv(const std::vector<RocCurve>& curves);
std::string report_to_csv(const EvalReport& report);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace sigver
