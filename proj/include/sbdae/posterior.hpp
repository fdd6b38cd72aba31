#pragma once

// Diagonal Laplace approximation of the energy-based posterior
// p(theta) ~ exp(-beta L(theta)) around the trained SVM2 weights.
//
//   difficult_i   = [1 - y_i (theta.x_i + bias) > 0]
//   s_j           = sum_{i difficult} x_ij^2
//   sigma_diag_j  = 1 / (beta * max(s_j, epsilon_floor))
//
// With exact_hessian the curvature of the squared hinge is used instead,
// s_j = 2 sum_{i difficult} x_ij^2 + 2 lambda.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sbdae/corpus.hpp"
#include "sbdae/svm2.hpp"

namespace sbdae {

inline constexpr double default_epsilon_floor = 1e-8;

struct Posterior {
    std::vector<double> theta_hat;
    std::vector<double> sigma_diag;
    double beta = 1.0;
    double epsilon_floor = default_epsilon_floor;

    std::size_t dim() const noexcept { return theta_hat.size(); }

    friend bool operator==(const Posterior &, const Posterior &) = default;
};

struct SigmaOptions {
    double epsilon_floor = default_epsilon_floor;
    bool exact_hessian = false;
};

std::vector<bool> difficult_mask(const LinearModel &model, const Docs &docs);

std::vector<double> sigma_diag(const LinearModel &model, const Docs &docs, double beta,
                               const SigmaOptions &options = {});

Posterior build_posterior(const LinearModel &model, const Docs &train, double beta,
                          const SigmaOptions &options = {});

void save(std::ostream &out, const Posterior &posterior);
void save(const std::filesystem::path &path, const Posterior &posterior);
Posterior load_posterior(std::istream &in);
Posterior load_posterior(const std::filesystem::path &path);

}  // namespace sbdae
