#include "sbdae/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sbdae/error.hpp"
#include "sbdae/log.hpp"
#include "posterior_io.hpp"
#include "text_io.hpp"

namespace sbdae {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double sigmoid(double a) {
    if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
    double e = std::exp(a);
    return e / (1.0 + e);
}

std::size_t loss_dim(const LossSpec &loss) {
    return std::visit(overloaded{[](const ProjectedQuadratic &p) { return p.theta.size(); },
                                 [](const MarginalizedBregman &m) { return m.posterior.dim(); },
                                 [](const auto &) { return std::size_t{0}; }},
                      loss);
}

void require_finite(double v, const char *what) {
    if (!std::isfinite(v)) throw NumericalError(std::string(what) + ": non-finite value");
}

}  // namespace

std::string_view loss_name(const LossSpec &loss) {
    return std::visit(overloaded{[](const SquaredEuclidean &) { return std::string_view("squared_euclidean"); },
                                 [](const ElementwiseKL &) { return std::string_view("elementwise_kl"); },
                                 [](const ProjectedQuadratic &) { return std::string_view("projected_quadratic"); },
                                 [](const MarginalizedBregman &) { return std::string_view("marginalized_bregman"); }},
                      loss);
}

// ---------------------------------------------------------------------------
// Model

AeModel AeModel::init(std::size_t input_dim, std::size_t hidden, LossSpec loss, std::uint64_t seed) {
    if (input_dim == 0 || hidden == 0) throw InvalidArgument("autoencoder dimensions must be positive");
    AeModel m{Matrix(hidden, input_dim), std::vector<double>(hidden, 0.0),
              std::vector<double>(input_dim, 0.0), std::move(loss)};
    const double a = 1.0 / std::sqrt(static_cast<double>(input_dim));
    Rng rng(seed);
    for (auto &w : m.W.data) w = a * (2.0 * uniform01(rng) - 1.0);
    m.validate();
    return m;
}

void AeModel::validate() const {
    if (W.rows == 0 || W.cols == 0) throw InvalidArgument("autoencoder has an empty weight matrix");
    if (W.data.size() != W.rows * W.cols) throw InvalidArgument("autoencoder weight storage mismatch");
    if (b.size() != hidden()) throw InvalidArgument("encoder bias length != hidden size");
    if (b_prime.size() != input_dim()) throw InvalidArgument("decoder bias length != input dimension");
    if (auto ld = loss_dim(loss); ld != 0 && ld != input_dim())
        throw InvalidArgument("loss parameters have dimension " + std::to_string(ld) +
                              ", autoencoder input has " + std::to_string(input_dim()));
    if (const auto *mb = std::get_if<MarginalizedBregman>(&loss);
        mb && mb->posterior.sigma_diag.size() != mb->posterior.theta_hat.size())
        throw InvalidArgument("posterior sigma_diag and theta_hat lengths differ");
}

void NoiseSpec::validate() const {
    if (!(rate >= 0.0 && rate < 1.0)) throw InvalidArgument("noise rate must be in [0, 1)");
}

// ---------------------------------------------------------------------------
// Forward pass

std::vector<double> encode(const AeModel &model, const SparseDoc &x) {
    if (x.min_dim() > model.input_dim()) throw InvalidArgument("encode: input dimension mismatch");
    std::vector<double> h(model.b);
    for (std::size_t r = 0; r < model.hidden(); ++r) {
        const auto w = model.W.row(r);
        double a = h[r];
        for (const auto &e : x.entries) a += w[e.id] * e.value;
        h[r] = a > 0.0 ? a : 0.0;
    }
    return h;
}

std::vector<double> encode(const AeModel &model, std::span<const double> x) {
    if (x.size() != model.input_dim()) throw InvalidArgument("encode: input dimension mismatch");
    std::vector<double> h(model.b);
    for (std::size_t r = 0; r < model.hidden(); ++r) {
        const auto w = model.W.row(r);
        double a = h[r];
        for (std::size_t c = 0; c < x.size(); ++c)
            if (x[c] != 0.0) a += w[c] * x[c];
        h[r] = a > 0.0 ? a : 0.0;
    }
    return h;
}

namespace {

// Writes W^T h + b' into `out`.
void decoder_logits(const AeModel &model, std::span<const double> h, std::vector<double> &out) {
    out.assign(model.b_prime.begin(), model.b_prime.end());
    for (std::size_t r = 0; r < model.hidden(); ++r) {
        if (h[r] == 0.0) continue;
        const auto w = model.W.row(r);
        const double hr = h[r];
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += w[c] * hr;
    }
}

}  // namespace

std::vector<double> decode(const AeModel &model, std::span<const double> h) {
    if (h.size() != model.hidden()) throw InvalidArgument("decode: hidden dimension mismatch");
    std::vector<double> x;
    decoder_logits(model, h, x);
    for (auto &v : x) v = sigmoid(v);
    return x;
}

SparseDoc corrupt(const SparseDoc &x, double rate, Rng &rng) {
    SparseDoc out{{}, x.label};
    out.entries.reserve(x.entries.size());
    for (const auto &e : x.entries)
        if (uniform01(rng) >= rate) out.entries.push_back(e);
    return out;
}

// ---------------------------------------------------------------------------
// Divergences

namespace {

void check_pair(std::span<const double> x_tilde, std::span<const double> x) {
    if (x_tilde.size() != x.size()) throw InvalidArgument("reconstruction and input lengths differ");
}

double xlogy_ratio(double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); }

}  // namespace

double reconstruction_loss(const LossSpec &loss, std::span<const double> x_tilde,
                           std::span<const double> x) {
    check_pair(x_tilde, x);
    const std::size_t d = x.size();
    return std::visit(
        overloaded{
            [&](const SquaredEuclidean &) {
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    double r = x_tilde[j] - x[j];
                    s += r * r;
                }
                return s;
            },
            [&](const ElementwiseKL &) {
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    if (!(x_tilde[j] > 0.0 && x_tilde[j] < 1.0))
                        throw InvalidArgument("elementwise KL needs reconstructions in (0, 1)");
                    if (!(x[j] >= 0.0 && x[j] <= 1.0))
                        throw InvalidArgument("elementwise KL needs inputs in [0, 1]");
                    s += xlogy_ratio(x[j], x_tilde[j]) + xlogy_ratio(1.0 - x[j], 1.0 - x_tilde[j]);
                }
                return std::max(s, 0.0);
            },
            [&](const ProjectedQuadratic &p) {
                if (p.theta.size() != d) throw InvalidArgument("projection length mismatch");
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) s += p.theta[j] * (x_tilde[j] - x[j]);
                return s * s;
            },
            [&](const MarginalizedBregman &m) {
                const auto &th = m.posterior.theta_hat;
                const auto &sg = m.posterior.sigma_diag;
                if (th.size() != d || sg.size() != d) throw InvalidArgument("posterior length mismatch");
                double s = 0.0, q = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    double r = x_tilde[j] - x[j];
                    s += th[j] * r;
                    q += sg[j] * r * r;
                }
                return s * s + q;
            }},
        loss);
}

std::vector<double> loss_output_gradient(const LossSpec &loss, std::span<const double> x_tilde,
                                         std::span<const double> x) {
    check_pair(x_tilde, x);
    const std::size_t d = x.size();
    std::vector<double> g(d);
    std::visit(overloaded{[&](const SquaredEuclidean &) {
                              for (std::size_t j = 0; j < d; ++j) g[j] = 2.0 * (x_tilde[j] - x[j]);
                          },
                          [&](const ElementwiseKL &) {
                              for (std::size_t j = 0; j < d; ++j)
                                  g[j] = (x_tilde[j] - x[j]) / (x_tilde[j] * (1.0 - x_tilde[j]));
                          },
                          [&](const ProjectedQuadratic &p) {
                              if (p.theta.size() != d) throw InvalidArgument("projection length mismatch");
                              double s = 0.0;
                              for (std::size_t j = 0; j < d; ++j) s += p.theta[j] * (x_tilde[j] - x[j]);
                              for (std::size_t j = 0; j < d; ++j) g[j] = 2.0 * s * p.theta[j];
                          },
                          [&](const MarginalizedBregman &m) {
                              const auto &th = m.posterior.theta_hat;
                              const auto &sg = m.posterior.sigma_diag;
                              if (th.size() != d || sg.size() != d)
                                  throw InvalidArgument("posterior length mismatch");
                              double s = 0.0;
                              for (std::size_t j = 0; j < d; ++j) s += th[j] * (x_tilde[j] - x[j]);
                              for (std::size_t j = 0; j < d; ++j)
                                  g[j] = 2.0 * s * th[j] + 2.0 * sg[j] * (x_tilde[j] - x[j]);
                          }},
               loss);
    return g;
}

// ---------------------------------------------------------------------------
// Backpropagation

AeGradient AeGradient::zeros_like(const AeModel &model) {
    return {Matrix(model.hidden(), model.input_dim()), std::vector<double>(model.hidden(), 0.0),
            std::vector<double>(model.input_dim(), 0.0), 0.0};
}

double accumulate_loss_gradient(const AeModel &model, const SparseDoc &x_bar, const SparseDoc &x,
                                double scale, AeGradient &acc) {
    const std::size_t d = model.input_dim();
    const std::size_t k = model.hidden();
    if (x_bar.min_dim() > d || x.min_dim() > d) throw InvalidArgument("loss_gradient: dimension mismatch");

    // forward; h keeps the pre-activation sign in `active`
    std::vector<double> h(k);
    std::vector<bool> active(k);
    for (std::size_t r = 0; r < k; ++r) {
        const auto w = model.W.row(r);
        double a = model.b[r];
        for (const auto &e : x_bar.entries) a += w[e.id] * e.value;
        active[r] = a > 0.0;
        h[r] = active[r] ? a : 0.0;
    }
    std::vector<double> x_tilde;
    decoder_logits(model, h, x_tilde);
    for (auto &v : x_tilde) v = sigmoid(v);
    const auto x_dense = to_dense(x, d);

    const double loss = reconstruction_loss(model.loss, x_tilde, x_dense);
    require_finite(loss, "loss_gradient");

    // delta at the decoder pre-activation
    std::vector<double> delta_out;
    if (std::holds_alternative<ElementwiseKL>(model.loss)) {
        delta_out.resize(d);
        for (std::size_t c = 0; c < d; ++c) delta_out[c] = x_tilde[c] - x_dense[c];
    } else {
        delta_out = loss_output_gradient(model.loss, x_tilde, x_dense);
        for (std::size_t c = 0; c < d; ++c) delta_out[c] *= x_tilde[c] * (1.0 - x_tilde[c]);
    }

    for (std::size_t c = 0; c < d; ++c) acc.b_prime[c] += scale * delta_out[c];

    for (std::size_t r = 0; r < k; ++r) {
        const auto w = model.W.row(r);
        auto gw = acc.W.row(r);
        double back = 0.0;
        if (active[r]) {
            for (std::size_t c = 0; c < d; ++c) back += w[c] * delta_out[c];
            // decoder path: d a_c / d W_rc = h_r
            const double hr = scale * h[r];
            for (std::size_t c = 0; c < d; ++c) gw[c] += hr * delta_out[c];
        }
        // encoder path
        const double delta_h = active[r] ? back : 0.0;
        if (delta_h != 0.0) {
            acc.b[r] += scale * delta_h;
            for (const auto &e : x_bar.entries) gw[e.id] += scale * delta_h * e.value;
        }
    }
    acc.loss += scale * loss;
    return loss;
}

AeGradient loss_gradient(const AeModel &model, const SparseDoc &x_bar, const SparseDoc &x) {
    auto g = AeGradient::zeros_like(model);
    accumulate_loss_gradient(model, x_bar, x, 1.0, g);
    for (double v : g.W.data) require_finite(v, "loss_gradient");
    return g;
}

double mean_reconstruction_loss(const AeModel &model, const Docs &docs) {
    if (docs.empty()) throw InvalidArgument("mean_reconstruction_loss: no documents");
    double s = 0.0;
    for (const auto &doc : docs) {
        auto x_tilde = decode(model, encode(model, doc));
        s += reconstruction_loss(model.loss, x_tilde, to_dense(doc, model.input_dim()));
    }
    return s / static_cast<double>(docs.size());
}

// ---------------------------------------------------------------------------
// Training

namespace {

void momentum_step(std::span<double> param, std::span<double> vel, std::span<const double> grad,
                   double mu, double eta) {
    for (std::size_t i = 0; i < param.size(); ++i) {
        vel[i] = mu * vel[i] - eta * grad[i];
        param[i] += vel[i];
    }
}

}  // namespace

AeModel train_dae(const Docs &docs, AeModel model, const NoiseSpec &noise, const SgdConfig &config,
                  TrainHistory *history) {
    model.validate();
    noise.validate();
    config.validate();
    if (docs.empty()) throw InvalidArgument("train_dae: no documents");
    for (const auto &doc : docs)
        if (doc.min_dim() > model.input_dim()) throw InvalidArgument("train_dae: dimension mismatch");

    const double mu = config.momentum, eta = config.learning_rate;
    auto vel = AeGradient::zeros_like(model);
    auto grad = AeGradient::zeros_like(model);
    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng order_rng(config.seed);
    Rng noise_rng(noise.seed);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle(order.begin(), order.end(), order_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            std::fill(grad.W.data.begin(), grad.W.data.end(), 0.0);
            std::fill(grad.b.begin(), grad.b.end(), 0.0);
            std::fill(grad.b_prime.begin(), grad.b_prime.end(), 0.0);
            for (std::size_t i = start; i < stop; ++i) {
                const auto &x = docs[order[i]];
                auto x_bar = corrupt(x, noise.rate, noise_rng);
                epoch_loss += accumulate_loss_gradient(model, x_bar, x, inv_batch, grad);
            }
            momentum_step(model.W.data, vel.W.data, grad.W.data, mu, eta);
            momentum_step(model.b, vel.b, grad.b, mu, eta);
            momentum_step(model.b_prime, vel.b_prime, grad.b_prime, mu, eta);
        }
        epoch_loss /= static_cast<double>(docs.size());
        if (!std::isfinite(epoch_loss))
            throw NumericalError("train_dae: non-finite loss at epoch " + std::to_string(epoch + 1) +
                                 " (learning_rate=" + detail::format_double(eta) + ")");
        log::debug("dae epoch " + std::to_string(epoch + 1) + " loss " + detail::format_double(epoch_loss));
        if (history) history->epoch_loss.push_back(epoch_loss);
    }
    return model;
}

// ---------------------------------------------------------------------------
// Softmax finetuning

SoftmaxClassifier attach_softmax(const AeModel &model) {
    model.validate();
    return {model.W, model.b, Matrix(2, model.hidden()), std::vector<double>(2, 0.0)};
}

namespace {

struct SoftmaxForward {
    std::vector<double> h;
    std::vector<bool> active;
    double p_pos;  // P(y = +1)
};

SoftmaxForward softmax_forward(const SoftmaxClassifier &clf, const SparseDoc &x) {
    const std::size_t k = clf.hidden();
    if (x.min_dim() > clf.input_dim()) throw InvalidArgument("softmax: dimension mismatch");
    SoftmaxForward f{std::vector<double>(k), std::vector<bool>(k), 0.0};
    for (std::size_t r = 0; r < k; ++r) {
        const auto w = clf.W.row(r);
        double a = clf.b[r];
        for (const auto &e : x.entries) a += w[e.id] * e.value;
        f.active[r] = a > 0.0;
        f.h[r] = f.active[r] ? a : 0.0;
    }
    double z0 = clf.c[0], z1 = clf.c[1];
    for (std::size_t r = 0; r < k; ++r) {
        z0 += clf.V(0, r) * f.h[r];
        z1 += clf.V(1, r) * f.h[r];
    }
    f.p_pos = sigmoid(z1 - z0);
    return f;
}

// -log P(y | x) computed from the logit gap without cancellation.
double nll(double gap, Label y) {
    double t = y == Label::positive ? -gap : gap;
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double logit_gap(const SoftmaxClassifier &clf, const SoftmaxForward &f) {
    double gap = clf.c[1] - clf.c[0];
    for (std::size_t r = 0; r < clf.hidden(); ++r) gap += (clf.V(1, r) - clf.V(0, r)) * f.h[r];
    return gap;
}

}  // namespace

double cross_entropy(const SoftmaxClassifier &clf, const Docs &docs) {
    if (docs.empty()) throw InvalidArgument("cross_entropy: no documents");
    double s = 0.0;
    for (const auto &doc : docs) {
        if (!doc.label) throw InvalidArgument("cross_entropy: unlabeled document");
        s += nll(logit_gap(clf, softmax_forward(clf, doc)), *doc.label);
    }
    return s / static_cast<double>(docs.size());
}

namespace {

double accumulate_softmax_gradient(const SoftmaxClassifier &clf, const SparseDoc &x, double scale,
                                   bool head_only, SoftmaxGradient &g) {
    if (!x.label) throw InvalidArgument("finetune: unlabeled document");
    const auto f = softmax_forward(clf, x);
    const double target = *x.label == Label::positive ? 1.0 : 0.0;
    // dz = p - onehot for both logits
    const double dz1 = f.p_pos - target;
    const double dz0 = -dz1;
    const std::size_t k = clf.hidden();
    for (std::size_t r = 0; r < k; ++r) {
        g.V(0, r) += scale * dz0 * f.h[r];
        g.V(1, r) += scale * dz1 * f.h[r];
    }
    g.c[0] += scale * dz0;
    g.c[1] += scale * dz1;
    if (!head_only) {
        for (std::size_t r = 0; r < k; ++r) {
            if (!f.active[r]) continue;
            const double dh = clf.V(0, r) * dz0 + clf.V(1, r) * dz1;
            if (dh == 0.0) continue;
            g.b[r] += scale * dh;
            auto gw = g.W.row(r);
            for (const auto &e : x.entries) gw[e.id] += scale * dh * e.value;
        }
    }
    double loss = nll(logit_gap(clf, f), *x.label);
    g.loss += scale * loss;
    return loss;
}

SoftmaxGradient softmax_zeros(const SoftmaxClassifier &clf) {
    return {Matrix(clf.hidden(), clf.input_dim()), std::vector<double>(clf.hidden(), 0.0),
            Matrix(2, clf.hidden()), std::vector<double>(2, 0.0), 0.0};
}

}  // namespace

SoftmaxGradient cross_entropy_gradient(const SoftmaxClassifier &clf, const Docs &batch) {
    auto g = softmax_zeros(clf);
    for (const auto &doc : batch) accumulate_softmax_gradient(clf, doc, 1.0, false, g);
    return g;
}

Label predict(const SoftmaxClassifier &clf, const SparseDoc &doc) {
    return softmax_forward(clf, doc).p_pos >= 0.5 ? Label::positive : Label::negative;
}

SoftmaxClassifier finetune_softmax(const AeModel &model, const Docs &labeled, const SgdConfig &config,
                                   const FinetuneOptions &options, TrainHistory *history) {
    config.validate();
    if (labeled.empty()) throw InvalidArgument("finetune_softmax: no labeled documents");
    auto clf = attach_softmax(model);
    auto vel = softmax_zeros(clf);
    auto grad = softmax_zeros(clf);
    const double mu = config.momentum, eta = config.learning_rate;
    std::vector<std::size_t> order(labeled.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(config.seed);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            std::fill(grad.W.data.begin(), grad.W.data.end(), 0.0);
            std::fill(grad.b.begin(), grad.b.end(), 0.0);
            std::fill(grad.V.data.begin(), grad.V.data.end(), 0.0);
            std::fill(grad.c.begin(), grad.c.end(), 0.0);
            for (std::size_t i = start; i < stop; ++i)
                epoch_loss += accumulate_softmax_gradient(clf, labeled[order[i]], inv_batch,
                                                          options.freeze_encoder, grad);
            momentum_step(clf.V.data, vel.V.data, grad.V.data, mu, eta);
            momentum_step(clf.c, vel.c, grad.c, mu, eta);
            if (!options.freeze_encoder) {
                momentum_step(clf.W.data, vel.W.data, grad.W.data, mu, eta);
                momentum_step(clf.b, vel.b, grad.b, mu, eta);
            }
        }
        epoch_loss /= static_cast<double>(labeled.size());
        if (!std::isfinite(epoch_loss))
            throw NumericalError("finetune_softmax: non-finite loss at epoch " + std::to_string(epoch + 1));
        if (history) history->epoch_loss.push_back(epoch_loss);
    }
    return clf;
}

AeModel with_encoder(const AeModel &model, const SoftmaxClassifier &clf) {
    if (clf.input_dim() != model.input_dim() || clf.hidden() != model.hidden())
        throw InvalidArgument("with_encoder: shape mismatch");
    AeModel out = model;
    out.W = clf.W;
    out.b = clf.b;
    return out;
}

// ---------------------------------------------------------------------------

Matrix extract_features(const AeModel &model, const Docs &docs) {
    Matrix f(docs.size(), model.hidden());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto h = encode(model, docs[i]);
        std::copy(h.begin(), h.end(), f.row(i).begin());
    }
    return f;
}

Docs features_as_docs(const Matrix &features, const Docs &source) {
    if (features.rows != source.size()) throw InvalidArgument("features_as_docs: row count mismatch");
    Docs out(features.rows);
    for (std::size_t i = 0; i < features.rows; ++i) {
        out[i].label = source[i].label;
        const auto row = features.row(i);
        for (std::size_t r = 0; r < row.size(); ++r)
            if (row[r] != 0.0) out[i].entries.push_back({static_cast<FeatureId>(r), row[r]});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void write_matrix(std::ostream &out, const Matrix &m) {
    for (std::size_t r = 0; r < m.rows; ++r) detail::write_reals(out, m.row(r));
}

Matrix read_matrix(detail::TokenReader &rd, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (auto &v : m.data) v = rd.real();
    return m;
}

}  // namespace

void save(std::ostream &out, const AeModel &model) {
    model.validate();
    out << "sbdae-autoencoder v1\n";
    out << "input_dim " << model.input_dim() << '\n';
    out << "hidden " << model.hidden() << '\n';
    out << "loss " << loss_name(model.loss) << '\n';
    out << "W\n";
    write_matrix(out, model.W);
    out << "b ";
    detail::write_reals(out, model.b);
    out << "b_prime ";
    detail::write_reals(out, model.b_prime);
    if (const auto *p = std::get_if<ProjectedQuadratic>(&model.loss)) {
        out << "projection ";
        detail::write_reals(out, p->theta);
    } else if (const auto *m = std::get_if<MarginalizedBregman>(&model.loss)) {
        save(out, m->posterior);
    }
}

void save(const std::filesystem::path &path, const AeModel &model) {
    auto out = detail::open_out(path);
    save(out, model);
    detail::finish_write(out, path);
}

AeModel load_ae_model(std::istream &in) {
    detail::TokenReader rd(in, "autoencoder");
    rd.expect("sbdae-autoencoder");
    rd.expect("v1");
    rd.expect("input_dim");
    const auto d = rd.count();
    rd.expect("hidden");
    const auto k = rd.count();
    rd.expect("loss");
    const auto tag = rd.word();
    AeModel m;
    rd.expect("W");
    m.W = read_matrix(rd, k, d);
    rd.expect("b");
    m.b = rd.reals(k);
    rd.expect("b_prime");
    m.b_prime = rd.reals(d);
    if (tag == "squared_euclidean") {
        m.loss = SquaredEuclidean{};
    } else if (tag == "elementwise_kl") {
        m.loss = ElementwiseKL{};
    } else if (tag == "projected_quadratic") {
        rd.expect("projection");
        m.loss = ProjectedQuadratic{rd.reals(d)};
    } else if (tag == "marginalized_bregman") {
        m.loss = MarginalizedBregman{detail::read_posterior_block(rd)};
    } else {
        rd.fail("unknown loss '" + tag + "'");
    }
    rd.expect_end();
    m.validate();
    return m;
}

AeModel load_ae_model(const std::filesystem::path &path) {
    auto in = detail::open_in(path);
    return load_ae_model(in);
}

void save(std::ostream &out, const SoftmaxClassifier &clf) {
    out << "sbdae-softmax v1\n";
    out << "input_dim " << clf.input_dim() << '\n';
    out << "hidden " << clf.hidden() << '\n';
    out << "W\n";
    write_matrix(out, clf.W);
    out << "b ";
    detail::write_reals(out, clf.b);
    out << "V\n";
    write_matrix(out, clf.V);
    out << "c ";
    detail::write_reals(out, clf.c);
}

void save(const std::filesystem::path &path, const SoftmaxClassifier &clf) {
    auto out = detail::open_out(path);
    save(out, clf);
    detail::finish_write(out, path);
}

SoftmaxClassifier load_softmax(std::istream &in) {
    detail::TokenReader rd(in, "softmax classifier");
    rd.expect("sbdae-softmax");
    rd.expect("v1");
    rd.expect("input_dim");
    const auto d = rd.count();
    rd.expect("hidden");
    const auto k = rd.count();
    SoftmaxClassifier clf;
    rd.expect("W");
    clf.W = read_matrix(rd, k, d);
    rd.expect("b");
    clf.b = rd.reals(k);
    rd.expect("V");
    clf.V = read_matrix(rd, 2, k);
    rd.expect("c");
    clf.c = rd.reals(2);
    rd.expect_end();
    return clf;
}

SoftmaxClassifier load_softmax(const std::filesystem::path &path) {
    auto in = detail::open_in(path);
    return load_softmax(in);
}

}  // namespace sbdae
