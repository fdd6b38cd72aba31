#pragma once

// Reference implementations used only by the tests. Nothing here shares code
// with the library's numerical paths: everything is dense and written from
// the defining formulas.

#include <cmath>
#include <functional>
#include <vector>

#include "sbdae/autoencoder.hpp"
#include "sbdae/corpus.hpp"
#include "sbdae/rng.hpp"

namespace oracle {

using Vec = std::vector<double>;

/// Central difference of f around params[i].
inline double central_difference(const std::function<double()> &f, double &param, double h = 1e-6) {
    const double saved = param;
    param = saved + h;
    const double up = f();
    param = saved - h;
    const double down = f();
    param = saved;
    return (up - down) / (2.0 * h);
}

/// |a - b| / max(|a|, |b|, floor)
inline double rel_error(double a, double b, double floor = 1e-6) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// SVM2 objective from its definition, on dense inputs.
inline double svm2_objective(const Vec &theta, double bias, double lambda, const std::vector<Vec> &xs,
                             const std::vector<double> &ys) {
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double m = bias;
        for (std::size_t j = 0; j < theta.size(); ++j) m += theta[j] * xs[i][j];
        double slack = std::max(0.0, 1.0 - ys[i] * m);
        loss += slack * slack;
    }
    double reg = 0.0;
    for (double t : theta) reg += t * t;
    return loss + lambda * reg;
}

/// Diagonal covariance by a dense double loop over (features, docs).
inline Vec sigma_brute_force(const Vec &theta, double bias, const std::vector<Vec> &xs,
                             const std::vector<double> &ys, double beta, double floor) {
    const std::size_t d = theta.size();
    Vec sigma(d);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double m = bias;
            for (std::size_t q = 0; q < d; ++q) m += theta[q] * xs[i][q];
            if (1.0 - ys[i] * m > 0.0) s += xs[i][j] * xs[i][j];
        }
        sigma[j] = 1.0 / (beta * std::max(s, floor));
    }
    return sigma;
}

/// Untied autoencoder: encoder weights We (k x d), decoder weights Wd (k x d,
/// used transposed). With We == Wd this is the tied model.
inline Vec untied_reconstruct(const sbdae::Matrix &We, const sbdae::Matrix &Wd, const Vec &b,
                              const Vec &b_prime, const Vec &x_bar) {
    const std::size_t k = We.rows, d = We.cols;
    Vec h(k);
    for (std::size_t r = 0; r < k; ++r) {
        double a = b[r];
        for (std::size_t c = 0; c < d; ++c) a += We(r, c) * x_bar[c];
        h[r] = std::max(0.0, a);
    }
    Vec out(d);
    for (std::size_t c = 0; c < d; ++c) {
        double a = b_prime[c];
        for (std::size_t r = 0; r < k; ++r) a += Wd(r, c) * h[r];
        out[c] = 1.0 / (1.0 + std::exp(-a));
    }
    return out;
}

/// Divergences written directly from their definitions.
inline double divergence(const sbdae::LossSpec &loss, const Vec &xt, const Vec &x) {
    const std::size_t d = x.size();
    double s = 0.0;
    if (std::holds_alternative<sbdae::SquaredEuclidean>(loss)) {
        for (std::size_t j = 0; j < d; ++j) s += (xt[j] - x[j]) * (xt[j] - x[j]);
    } else if (std::holds_alternative<sbdae::ElementwiseKL>(loss)) {
        for (std::size_t j = 0; j < d; ++j) {
            if (x[j] > 0) s += x[j] * std::log(x[j] / xt[j]);
            if (x[j] < 1) s += (1 - x[j]) * std::log((1 - x[j]) / (1 - xt[j]));
        }
    } else if (const auto *p = std::get_if<sbdae::ProjectedQuadratic>(&loss)) {
        for (std::size_t j = 0; j < d; ++j) s += p->theta[j] * (xt[j] - x[j]);
        s = s * s;
    } else {
        const auto &post = std::get<sbdae::MarginalizedBregman>(loss).posterior;
        // (xt - x)^T (theta theta^T + diag(sigma)) (xt - x), expanded as a full quadratic form
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t c = 0; c < d; ++c) {
                double m = post.theta_hat[a] * post.theta_hat[c] + (a == c ? post.sigma_diag[a] : 0.0);
                s += (xt[a] - x[a]) * m * (xt[c] - x[c]);
            }
    }
    return s;
}

/// Random sparse doc with values in (0, 1], about `density` of coordinates set.
inline sbdae::SparseDoc random_doc(sbdae::Rng &rng, std::size_t d, double density,
                                   std::optional<sbdae::Label> label = std::nullopt) {
    sbdae::SparseDoc doc;
    doc.label = label;
    for (std::size_t j = 0; j < d; ++j)
        if (sbdae::uniform01(rng) < density)
            doc.entries.push_back({static_cast<sbdae::FeatureId>(j), 0.05 + 0.95 * sbdae::uniform01(rng)});
    if (doc.entries.empty()) doc.entries.push_back({static_cast<sbdae::FeatureId>(sbdae::uniform_index(rng, d)), 1.0});
    return doc;
}

inline sbdae::Label random_label(sbdae::Rng &rng) {
    return sbdae::uniform01(rng) < 0.5 ? sbdae::Label::negative : sbdae::Label::positive;
}

inline Vec random_vec(sbdae::Rng &rng, std::size_t n, double lo, double hi) {
    Vec v(n);
    for (auto &x : v) x = lo + (hi - lo) * sbdae::uniform01(rng);
    return v;
}

}  // namespace oracle
