#include "sbdae/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "sbdae/error.hpp"
#include "sbdae/log.hpp"
#include "posterior_io.hpp"
#include "text_io.hpp"

namespace sbdae {

std::vector<bool> difficult_mask(const LinearModel &model, const Docs &docs) {
    std::vector<bool> mask(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto &doc = docs[i];
        if (!doc.label) throw InvalidArgument("difficult_mask: unlabeled document");
        if (doc.min_dim() > model.dim()) throw InvalidArgument("difficult_mask: dimension mismatch");
        mask[i] = 1.0 - sign_of(*doc.label) * model.margin(doc) > 0.0;
    }
    return mask;
}

std::vector<double> sigma_diag(const LinearModel &model, const Docs &docs, double beta,
                               const SigmaOptions &options) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
    if (!(options.epsilon_floor > 0.0)) throw InvalidArgument("epsilon_floor must be positive");

    const auto mask = difficult_mask(model, docs);
    std::vector<double> s(model.dim(), 0.0);
    std::size_t n_difficult = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (!mask[i]) continue;
        ++n_difficult;
        for (const auto &e : docs[i].entries) s[e.id] += e.value * e.value;
    }
    if (n_difficult == 0)
        log::warn("sigma_diag: no difficult examples; every variance sits at the floor");

    std::vector<double> sigma(model.dim());
    for (std::size_t j = 0; j < s.size(); ++j) {
        double curvature = options.exact_hessian ? 2.0 * s[j] + 2.0 * model.lambda : s[j];
        sigma[j] = 1.0 / (beta * std::max(curvature, options.epsilon_floor));
    }
    return sigma;
}

Posterior build_posterior(const LinearModel &model, const Docs &train, double beta,
                          const SigmaOptions &options) {
    Posterior p;
    p.theta_hat = model.theta;
    p.sigma_diag = sigma_diag(model, train, beta, options);
    p.beta = beta;
    p.epsilon_floor = options.epsilon_floor;
    return p;
}

void save(std::ostream &out, const Posterior &p) {
    out << "sbdae-posterior v1\n";
    out << "dim " << p.dim() << '\n';
    out << "beta " << detail::format_double(p.beta) << '\n';
    out << "epsilon_floor " << detail::format_double(p.epsilon_floor) << '\n';
    out << "theta_hat ";
    detail::write_reals(out, p.theta_hat);
    out << "sigma_diag ";
    detail::write_reals(out, p.sigma_diag);
}

void save(const std::filesystem::path &path, const Posterior &p) {
    auto out = detail::open_out(path);
    save(out, p);
    detail::finish_write(out, path);
}

namespace detail {

Posterior read_posterior_block(TokenReader &r) {
    r.expect("sbdae-posterior");
    r.expect("v1");
    r.expect("dim");
    auto d = r.count();
    Posterior p;
    r.expect("beta");
    p.beta = r.real();
    r.expect("epsilon_floor");
    p.epsilon_floor = r.real();
    r.expect("theta_hat");
    p.theta_hat = r.reals(d);
    r.expect("sigma_diag");
    p.sigma_diag = r.reals(d);
    return p;
}

}  // namespace detail

Posterior load_posterior(std::istream &in) {
    detail::TokenReader r(in, "posterior");
    auto p = detail::read_posterior_block(r);
    r.expect_end();
    return p;
}

Posterior load_posterior(const std::filesystem::path &path) {
    auto in = detail::open_in(path);
    return load_posterior(in);
}

}  // namespace sbdae
