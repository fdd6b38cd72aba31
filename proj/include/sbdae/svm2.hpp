#pragma once

// L2-regularized squared-hinge linear classifier ("SVM2"):
//
//   L(theta, bias) = sum_i max(0, 1 - y_i (theta.x_i + bias))^2 + lambda |theta|^2
//
// The bias is not regularized.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sbdae/corpus.hpp"

namespace sbdae {

struct LinearModel {
    std::vector<double> theta;
    double bias = 0.0;
    double lambda = 0.0;

    LinearModel() = default;
    LinearModel(std::size_t dim, double lambda) : theta(dim, 0.0), lambda(lambda) {}

    std::size_t dim() const noexcept { return theta.size(); }
    double margin(const SparseDoc &doc) const { return dot(doc, theta) + bias; }

    friend bool operator==(const LinearModel &, const LinearModel &) = default;
};

/// Mini-batch SGD with classical momentum: v <- mu v - eta g, w <- w + v.
struct SgdConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t epochs = 30;
    std::size_t batch_size = 64;
    std::uint64_t seed = 0;

    void validate() const;
};

struct LinearGradient {
    std::vector<double> theta;
    double bias = 0.0;
};

double svm2_loss(const LinearModel &model, const Docs &docs);

/// Exact gradient of svm2_loss over `batch`. Cost is O(nnz(batch) + dim).
LinearGradient svm2_grad(const LinearModel &model, const Docs &batch);

/// Minimizes svm2_loss / n by momentum SGD. Each step follows the mean
/// per-example hinge gradient of a shuffled mini-batch plus 2 lambda theta / n.
LinearModel train_svm2(const Docs &train, std::size_t dim, double lambda, const SgdConfig &config);

/// sign(theta.x + bias) with sign(0) = +1.
Label predict(const LinearModel &model, const SparseDoc &doc);

/// Fraction of labeled docs that are misclassified.
double error_rate(const LinearModel &model, const Docs &docs);

void save(std::ostream &out, const LinearModel &model);
void save(const std::filesystem::path &path, const LinearModel &model);
LinearModel load_linear_model(std::istream &in);
LinearModel load_linear_model(const std::filesystem::path &path);

}  // namespace sbdae
