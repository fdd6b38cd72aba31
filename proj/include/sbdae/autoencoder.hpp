#pragma once

// Tied-weight denoising autoencoder
//
//   h  = max(0, W xbar + b)          W is k x d
//   x~ = sigmoid(W^T h + b')
//
// trained to reconstruct the clean x from a masked copy xbar under one of four
// divergences D(x~, x):
//
//   SquaredEuclidean     sum_j (x~_j - x_j)^2
//   ElementwiseKL        sum_j x_j log(x_j / x~_j) + (1 - x_j) log((1 - x_j) / (1 - x~_j))
//   ProjectedQuadratic   (theta . (x~ - x))^2
//   MarginalizedBregman  (theta_hat . (x~ - x))^2 + sum_j sigma_j (x~_j - x_j)^2

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sbdae/corpus.hpp"
#include "sbdae/posterior.hpp"
#include "sbdae/rng.hpp"
#include "sbdae/svm2.hpp"

namespace sbdae {

struct SquaredEuclidean {
    friend bool operator==(const SquaredEuclidean &, const SquaredEuclidean &) = default;
};

struct ElementwiseKL {
    friend bool operator==(const ElementwiseKL &, const ElementwiseKL &) = default;
};

struct ProjectedQuadratic {
    std::vector<double> theta;
    friend bool operator==(const ProjectedQuadratic &, const ProjectedQuadratic &) = default;
};

struct MarginalizedBregman {
    Posterior posterior;
    friend bool operator==(const MarginalizedBregman &, const MarginalizedBregman &) = default;
};

using LossSpec = std::variant<SquaredEuclidean, ElementwiseKL, ProjectedQuadratic, MarginalizedBregman>;

/// Stable tag used in model files and reports.
std::string_view loss_name(const LossSpec &loss);

/// Row-major dense matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    friend bool operator==(const Matrix &, const Matrix &) = default;
};

struct AeModel {
    Matrix W;                     // k x d; the decoder uses W^T
    std::vector<double> b;        // k
    std::vector<double> b_prime;  // d
    LossSpec loss;

    std::size_t input_dim() const noexcept { return W.cols; }
    std::size_t hidden() const noexcept { return W.rows; }

    /// W ~ U[-1/sqrt(d), 1/sqrt(d)], biases zero.
    static AeModel init(std::size_t input_dim, std::size_t hidden, LossSpec loss, std::uint64_t seed);

    /// Throws InvalidArgument if shapes disagree (including the loss parameters).
    void validate() const;

    friend bool operator==(const AeModel &, const AeModel &) = default;
};

/// Masking noise: each nonzero coordinate is zeroed independently with
/// probability `rate`.
struct NoiseSpec {
    double rate = 0.3;
    std::uint64_t seed = 0;

    void validate() const;
};

std::vector<double> encode(const AeModel &model, const SparseDoc &x);
std::vector<double> encode(const AeModel &model, std::span<const double> x);
std::vector<double> decode(const AeModel &model, std::span<const double> h);

SparseDoc corrupt(const SparseDoc &x, double rate, Rng &rng);

double reconstruction_loss(const LossSpec &loss, std::span<const double> x_tilde,
                           std::span<const double> x);

/// dD/dx~ for the given divergence.
std::vector<double> loss_output_gradient(const LossSpec &loss, std::span<const double> x_tilde,
                                         std::span<const double> x);

struct AeGradient {
    Matrix W;
    std::vector<double> b;
    std::vector<double> b_prime;
    double loss = 0.0;

    static AeGradient zeros_like(const AeModel &model);
};

/// Backpropagates D(decode(encode(x_bar)), x) through the tied network. The
/// ReLU derivative at exactly 0 is taken as 0.
AeGradient loss_gradient(const AeModel &model, const SparseDoc &x_bar, const SparseDoc &x);

/// Same, accumulating `scale * gradient` into `acc` and returning the loss.
double accumulate_loss_gradient(const AeModel &model, const SparseDoc &x_bar, const SparseDoc &x,
                                double scale, AeGradient &acc);

/// Clean-input reconstruction loss averaged over docs.
double mean_reconstruction_loss(const AeModel &model, const Docs &docs);

struct TrainHistory {
    std::vector<double> epoch_loss;  // mean per-example loss on the corrupted inputs
};

/// Momentum SGD; one fresh corruption per example per epoch. Labels are ignored.
AeModel train_dae(const Docs &docs, AeModel init, const NoiseSpec &noise, const SgdConfig &config,
                  TrainHistory *history = nullptr);

/// Encoder of an autoencoder plus a two-class softmax head on the hidden layer.
struct SoftmaxClassifier {
    Matrix W;  // k x d
    std::vector<double> b;
    Matrix V;  // 2 x k, row 0 = negative, row 1 = positive
    std::vector<double> c;

    std::size_t input_dim() const noexcept { return W.cols; }
    std::size_t hidden() const noexcept { return W.rows; }

    friend bool operator==(const SoftmaxClassifier &, const SoftmaxClassifier &) = default;
};

struct SoftmaxGradient {
    Matrix W;
    std::vector<double> b;
    Matrix V;
    std::vector<double> c;
    double loss = 0.0;
};

/// Drops the decoder of `model` and attaches a zero-initialized softmax head.
SoftmaxClassifier attach_softmax(const AeModel &model);

/// Mean cross-entropy of the classifier on labeled docs.
double cross_entropy(const SoftmaxClassifier &clf, const Docs &docs);

/// Gradient of the summed cross-entropy over `batch`.
SoftmaxGradient cross_entropy_gradient(const SoftmaxClassifier &clf, const Docs &batch);

Label predict(const SoftmaxClassifier &clf, const SparseDoc &doc);

struct FinetuneOptions {
    bool freeze_encoder = false;
};

/// Trains head and encoder jointly on clean inputs by momentum SGD on the
/// mean cross-entropy.
SoftmaxClassifier finetune_softmax(const AeModel &model, const Docs &labeled, const SgdConfig &config,
                                   const FinetuneOptions &options = {},
                                   TrainHistory *history = nullptr);

/// Copies the finetuned encoder back into an autoencoder (decoder bias kept).
AeModel with_encoder(const AeModel &model, const SoftmaxClassifier &clf);

/// Row i = encode(model, docs[i]) on the clean input.
Matrix extract_features(const AeModel &model, const Docs &docs);

/// Feature rows as sparse docs carrying the source labels (zeros dropped).
Docs features_as_docs(const Matrix &features, const Docs &source);

void save(std::ostream &out, const AeModel &model);
void save(const std::filesystem::path &path, const AeModel &model);
AeModel load_ae_model(std::istream &in);
AeModel load_ae_model(const std::filesystem::path &path);

void save(std::ostream &out, const SoftmaxClassifier &clf);
void save(const std::filesystem::path &path, const SoftmaxClassifier &clf);
SoftmaxClassifier load_softmax(std::istream &in);
SoftmaxClassifier load_softmax(const std::filesystem::path &path);

}  // namespace sbdae
