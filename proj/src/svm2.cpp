#include "sbdae/svm2.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sbdae/error.hpp"
#include "sbdae/log.hpp"
#include "sbdae/rng.hpp"
#include "text_io.hpp"

namespace sbdae {

namespace {

void check_labeled(const LinearModel &model, const Docs &docs, const char *op) {
    for (const auto &doc : docs) {
        if (!doc.label) throw InvalidArgument(std::string(op) + ": unlabeled document");
        if (doc.min_dim() > model.dim())
            throw InvalidArgument(std::string(op) + ": document dimension exceeds model dimension " +
                                  std::to_string(model.dim()));
    }
}

double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

void SgdConfig::validate() const {
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidArgument("momentum must be in [0, 1)");
    if (batch_size == 0) throw InvalidArgument("batch_size must be positive");
}

double svm2_loss(const LinearModel &model, const Docs &docs) {
    check_labeled(model, docs, "svm2_loss");
    double loss = 0.0;
    for (const auto &doc : docs) {
        double slack = 1.0 - sign_of(*doc.label) * model.margin(doc);
        if (slack > 0.0) loss += slack * slack;
    }
    return loss + model.lambda * squared_norm(model.theta);
}

LinearGradient svm2_grad(const LinearModel &model, const Docs &batch) {
    check_labeled(model, batch, "svm2_grad");
    LinearGradient g{std::vector<double>(model.dim()), 0.0};
    for (std::size_t j = 0; j < model.dim(); ++j) g.theta[j] = 2.0 * model.lambda * model.theta[j];
    for (const auto &doc : batch) {
        double y = sign_of(*doc.label);
        double slack = 1.0 - y * model.margin(doc);
        if (slack <= 0.0) continue;
        double c = -2.0 * slack * y;
        for (const auto &e : doc.entries) g.theta[e.id] += c * e.value;
        g.bias += c;
    }
    return g;
}

LinearModel train_svm2(const Docs &train, std::size_t dim, double lambda, const SgdConfig &config) {
    config.validate();
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
    if (train.empty()) throw InvalidArgument("train_svm2: empty training set");
    LinearModel model(dim, lambda);
    check_labeled(model, train, "train_svm2");

    const double n = static_cast<double>(train.size());
    const double eta = config.learning_rate;
    const double mu = config.momentum;
    const double initial_loss = svm2_loss(model, train);

    std::vector<double> vel(dim, 0.0), grad(dim, 0.0);
    double vel_bias = 0.0;
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(config.seed);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);

            for (std::size_t j = 0; j < dim; ++j) grad[j] = 2.0 * lambda * model.theta[j] / n;
            double grad_bias = 0.0;
            for (std::size_t b = start; b < stop; ++b) {
                const auto &doc = train[order[b]];
                double y = sign_of(*doc.label);
                double slack = 1.0 - y * model.margin(doc);
                if (slack <= 0.0) continue;
                double c = -2.0 * slack * y * inv_batch;
                for (const auto &e : doc.entries) grad[e.id] += c * e.value;
                grad_bias += c;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                vel[j] = mu * vel[j] - eta * grad[j];
                model.theta[j] += vel[j];
            }
            vel_bias = mu * vel_bias - eta * grad_bias;
            model.bias += vel_bias;
        }
        double loss = svm2_loss(model, train);
        if (!std::isfinite(loss))
            throw NumericalError("train_svm2: non-finite loss at epoch " + std::to_string(epoch + 1) +
                                 " (learning_rate=" + detail::format_double(eta) + ")");
        log::debug("svm2 epoch " + std::to_string(epoch + 1) + " loss " + detail::format_double(loss));
        if (epoch + 1 == config.epochs && loss > initial_loss)
            log::warn("train_svm2: final loss exceeds initial loss; learning rate may be too high");
    }
    return model;
}

Label predict(const LinearModel &model, const SparseDoc &doc) {
    if (doc.min_dim() > model.dim()) throw InvalidArgument("predict: dimension mismatch");
    return model.margin(doc) >= 0.0 ? Label::positive : Label::negative;
}

double error_rate(const LinearModel &model, const Docs &docs) {
    if (docs.empty()) throw InvalidArgument("error_rate: empty document list");
    check_labeled(model, docs, "error_rate");
    std::size_t wrong = 0;
    for (const auto &doc : docs) wrong += predict(model, doc) != *doc.label;
    return static_cast<double>(wrong) / static_cast<double>(docs.size());
}

// ---------------------------------------------------------------------------

void save(std::ostream &out, const LinearModel &model) {
    out << "sbdae-linear-model v1\n";
    out << "dim " << model.dim() << '\n';
    out << "lambda " << detail::format_double(model.lambda) << '\n';
    out << "bias " << detail::format_double(model.bias) << '\n';
    out << "theta ";
    detail::write_reals(out, model.theta);
}

void save(const std::filesystem::path &path, const LinearModel &model) {
    auto out = detail::open_out(path);
    save(out, model);
    detail::finish_write(out, path);
}

LinearModel load_linear_model(std::istream &in) {
    detail::TokenReader r(in, "linear model");
    r.expect("sbdae-linear-model");
    r.expect("v1");
    r.expect("dim");
    LinearModel m;
    auto d = r.count();
    r.expect("lambda");
    m.lambda = r.real();
    r.expect("bias");
    m.bias = r.real();
    r.expect("theta");
    m.theta = r.reals(d);
    r.expect_end();
    return m;
}

LinearModel load_linear_model(const std::filesystem::path &path) {
    auto in = detail::open_in(path);
    return load_linear_model(in);
}

}  // namespace sbdae
