#pragma once

// End-to-end runs of the BoW baseline, the plain denoising autoencoder (DAE),
// DAE with softmax finetuning (DAE+), and the Bregman-loss autoencoder
// (SBDAE, SBDAE+). Every method except BoW ends with SVM2 on the hidden-layer
// features.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbdae/autoencoder.hpp"
#include "sbdae/corpus.hpp"
#include "sbdae/posterior.hpp"
#include "sbdae/svm2.hpp"

namespace sbdae {

enum class Method { bow, dae, dae_plus, sbdae, sbdae_plus };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

inline bool uses_autoencoder(Method m) { return m != Method::bow; }
inline bool uses_posterior(Method m) { return m == Method::sbdae || m == Method::sbdae_plus; }
inline bool uses_finetune(Method m) { return m == Method::dae_plus || m == Method::sbdae_plus; }

struct PipelineConfig {
    Method method = Method::sbdae;
    std::vector<double> beta_grid{1e4, 1e5, 1e6, 1e7, 1e8};
    bool use_unlabeled = false;
    /// 0 picks the method default: 200 for SBDAE/SBDAE+, 2000 for DAE/DAE+.
    std::size_t hidden_size = 0;
    double noise_rate = 0.3;
    SgdConfig svm_sgd{0.01, 0.9, 30, 64, 0};
    SgdConfig ae_sgd{0.002, 0.9, 30, 32, 0};
    SgdConfig finetune_sgd{0.01, 0.9, 10, 32, 0};
    double lambda_bow = 1e-4;
    double lambda_features = 1e-4;
    double epsilon_floor = default_epsilon_floor;
    bool exact_hessian = false;
    double validation_fraction = 0.2;
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    std::size_t effective_hidden() const;
    void validate() const;
};

struct BetaScore {
    double beta;
    double validation_error;
};

struct RunReport {
    Method method = Method::bow;
    std::optional<double> chosen_beta;
    std::vector<BetaScore> beta_scores;
    double train_error = 0.0;
    double test_error = 0.0;
    double seconds = 0.0;
    std::size_t n_features = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t n_unlabeled_used = 0;
    PipelineConfig config;
};

/// Models produced by a run, kept for inspection and reuse.
struct RunArtifacts {
    std::optional<LinearModel> bow_svm;
    std::optional<Posterior> posterior;
    std::optional<AeModel> autoencoder;
    std::optional<SoftmaxClassifier> finetuned;
    std::optional<LinearModel> feature_svm;
};

struct RunOptions {
    /// When set, every intermediate model, the report and a manifest are written here.
    std::optional<std::filesystem::path> run_dir;
    RunArtifacts *artifacts = nullptr;
};

/// Stage seeds, all derived from config.seed.
struct StageSeeds {
    std::uint64_t split, svm_bow, ae_init, ae_order, ae_noise, finetune, svm_features;
    static StageSeeds from(std::uint64_t seed);
};

RunReport run(const Corpus &corpus, const PipelineConfig &config, const RunOptions &options = {});

struct BetaSelection {
    double chosen_beta;
    std::vector<BetaScore> scores;
};

/// Holds out validation_fraction of train, runs the method per beta on the
/// rest, and picks the lowest validation error (ties go to the larger beta).
BetaSelection select_beta(const Corpus &corpus, const PipelineConfig &config);

/// Argmin with ties resolved toward the larger beta.
double choose_beta(const std::vector<BetaScore> &scores);

/// Seeded split of `train` into (fit, validation).
std::pair<Docs, Docs> split_train(const Docs &train, double validation_fraction, std::uint64_t seed);

std::vector<RunReport> compare(const Corpus &corpus, const std::vector<PipelineConfig> &configs);

// --- individual stages (the CLI drives these one at a time) --------------------

LinearModel fit_bow_svm(const Corpus &corpus, const PipelineConfig &config);
Posterior fit_posterior(const LinearModel &bow_svm, const Corpus &corpus, double beta,
                        const PipelineConfig &config);
/// Trains the autoencoder with the loss the method calls for (posterior
/// required for SBDAE/SBDAE+).
AeModel fit_autoencoder(const Corpus &corpus, const PipelineConfig &config,
                        const std::optional<Posterior> &posterior);
SoftmaxClassifier fit_finetune(const AeModel &ae, const Corpus &corpus, const PipelineConfig &config);

struct Evaluation {
    LinearModel classifier;
    double train_error;
    double test_error;
};

/// Final stage: SVM2 on the clean hidden features of train, evaluated on train and test.
Evaluation evaluate_features(const AeModel &ae, const Corpus &corpus, const PipelineConfig &config);

// --- reports -------------------------------------------------------------------

void render_reports(std::ostream &out, const std::vector<RunReport> &reports);
/// One JSON object per line. Timing is left out unless include_timing is set,
/// so reruns produce identical bytes.
void write_report_records(std::ostream &out, const std::vector<RunReport> &reports,
                          bool include_timing = false);
std::string config_json(const PipelineConfig &config);

/// Overlays the keys of a JSON object (same names as config_json) onto
/// `base`. Unknown keys and wrongly typed values throw InvalidArgument.
PipelineConfig config_from_json(std::string_view json, PipelineConfig base = {});

}  // namespace sbdae
