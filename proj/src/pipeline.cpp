#include "sbdae/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "sbdae/error.hpp"
#include "sbdae/log.hpp"
#include "sbdae/rng.hpp"
#include "text_io.hpp"

namespace sbdae {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::bow: return "bow";
        case Method::dae: return "dae";
        case Method::dae_plus: return "dae+";
        case Method::sbdae: return "sbdae";
        case Method::sbdae_plus: return "sbdae+";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "bow") return Method::bow;
    if (s == "dae") return Method::dae;
    if (s == "dae+" || s == "dae_plus" || s == "dae-plus") return Method::dae_plus;
    if (s == "sbdae") return Method::sbdae;
    if (s == "sbdae+" || s == "sbdae_plus" || s == "sbdae-plus") return Method::sbdae_plus;
    throw InvalidArgument("unknown method '" + std::string(name) + "' (bow, dae, dae+, sbdae, sbdae+)");
}

std::size_t PipelineConfig::effective_hidden() const {
    if (hidden_size) return hidden_size;
    return uses_posterior(method) ? 200 : 2000;
}

void PipelineConfig::validate() const {
    if (uses_posterior(method)) {
        if (beta_grid.empty()) throw InvalidArgument("beta_grid must not be empty for " + std::string(method_name(method)));
        for (double b : beta_grid)
            if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("beta values must be positive");
    }
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw InvalidArgument("validation_fraction must be in (0, 1)");
    if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw InvalidArgument("noise rate must be in [0, 1)");
    if (!(lambda_bow >= 0.0) || !(lambda_features >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
    svm_sgd.validate();
    ae_sgd.validate();
    finetune_sgd.validate();
}

StageSeeds StageSeeds::from(std::uint64_t seed) {
    return {derive_seed(seed, "split"),    derive_seed(seed, "svm-bow"),  derive_seed(seed, "ae-init"),
            derive_seed(seed, "ae-order"), derive_seed(seed, "ae-noise"), derive_seed(seed, "finetune"),
            derive_seed(seed, "svm-features")};
}

namespace {

SgdConfig seeded(SgdConfig c, std::uint64_t seed) {
    c.seed = seed;
    return c;
}

void require_labeled_train(const Corpus &corpus) {
    if (corpus.train.empty()) throw InvalidArgument("corpus has no labeled training documents");
}

}  // namespace

// ---------------------------------------------------------------------------
// Stages

LinearModel fit_bow_svm(const Corpus &corpus, const PipelineConfig &config) {
    require_labeled_train(corpus);
    const auto seeds = StageSeeds::from(config.seed);
    return train_svm2(corpus.train, corpus.dim(), config.lambda_bow, seeded(config.svm_sgd, seeds.svm_bow));
}

Posterior fit_posterior(const LinearModel &bow_svm, const Corpus &corpus, double beta,
                        const PipelineConfig &config) {
    return build_posterior(bow_svm, corpus.train, beta, {config.epsilon_floor, config.exact_hessian});
}

AeModel fit_autoencoder(const Corpus &corpus, const PipelineConfig &config,
                        const std::optional<Posterior> &posterior) {
    const auto seeds = StageSeeds::from(config.seed);
    LossSpec loss = SquaredEuclidean{};
    if (uses_posterior(config.method)) {
        if (!posterior) throw InvalidArgument(std::string(method_name(config.method)) + " needs a posterior");
        loss = MarginalizedBregman{*posterior};
    }
    Docs docs = corpus.train;
    if (config.use_unlabeled) docs.insert(docs.end(), corpus.unlabeled.begin(), corpus.unlabeled.end());
    if (docs.empty()) throw InvalidArgument("no documents to train the autoencoder on");
    auto init = AeModel::init(corpus.dim(), config.effective_hidden(), std::move(loss), seeds.ae_init);
    return train_dae(docs, std::move(init), NoiseSpec{config.noise_rate, seeds.ae_noise},
                     seeded(config.ae_sgd, seeds.ae_order));
}

SoftmaxClassifier fit_finetune(const AeModel &ae, const Corpus &corpus, const PipelineConfig &config) {
    require_labeled_train(corpus);
    const auto seeds = StageSeeds::from(config.seed);
    return finetune_softmax(ae, corpus.train, seeded(config.finetune_sgd, seeds.finetune));
}

Evaluation evaluate_features(const AeModel &ae, const Corpus &corpus, const PipelineConfig &config) {
    require_labeled_train(corpus);
    const auto seeds = StageSeeds::from(config.seed);
    auto train = features_as_docs(extract_features(ae, corpus.train), corpus.train);

    // ReLU features are unbounded; fit on columns scaled to max 1 over train,
    // then fold the scale into theta so the model applies to raw features.
    std::vector<double> scale(ae.hidden(), 0.0);
    for (const auto &doc : train)
        for (const auto &e : doc.entries) scale[e.id] = std::max(scale[e.id], e.value);
    for (auto &v : scale)
        if (!(v > 0.0)) v = 1.0;
    Docs scaled = train;
    for (auto &doc : scaled)
        for (auto &e : doc.entries) e.value /= scale[e.id];
    auto clf = train_svm2(scaled, ae.hidden(), config.lambda_features,
                          seeded(config.svm_sgd, seeds.svm_features));
    for (std::size_t j = 0; j < clf.dim(); ++j) clf.theta[j] /= scale[j];
    const double train_error = error_rate(clf, train);
    Evaluation ev{std::move(clf), train_error, 0.0};
    if (!corpus.test.empty()) {
        auto test = features_as_docs(extract_features(ae, corpus.test), corpus.test);
        ev.test_error = error_rate(ev.classifier, test);
    }
    return ev;
}

namespace {

// Autoencoder stages for one beta (or none): posterior -> AE -> finetune.
struct AeStages {
    std::optional<Posterior> posterior;
    AeModel ae;
    std::optional<SoftmaxClassifier> finetuned;
};

AeStages fit_ae_stages(const Corpus &corpus, const PipelineConfig &config,
                       const std::optional<LinearModel> &bow_svm, std::optional<double> beta) {
    AeStages s{std::nullopt, {}, std::nullopt};
    if (uses_posterior(config.method)) s.posterior = fit_posterior(*bow_svm, corpus, *beta, config);
    s.ae = fit_autoencoder(corpus, config, s.posterior);
    if (uses_finetune(config.method)) {
        s.finetuned = fit_finetune(s.ae, corpus, config);
        s.ae = with_encoder(s.ae, *s.finetuned);
    }
    return s;
}

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto &th : pool) th.join();
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::pair<Docs, Docs> split_train(const Docs &train, double validation_fraction, std::uint64_t seed) {
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    shuffle(order.begin(), order.end(), rng);
    const auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(train.size())));
    if (n_val == 0 || n_val >= train.size())
        throw InvalidArgument("validation split of " + std::to_string(train.size()) +
                              " training docs leaves an empty side");
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    Docs fit, val;
    for (std::size_t i = 0; i < n_val; ++i) val.push_back(train[order[i]]);
    for (std::size_t i = n_val; i < order.size(); ++i) fit.push_back(train[order[i]]);
    return {std::move(fit), std::move(val)};
}

double choose_beta(const std::vector<BetaScore> &scores) {
    if (scores.empty()) throw InvalidArgument("choose_beta: no scores");
    auto best = scores.front();
    for (const auto &s : scores)
        if (s.validation_error < best.validation_error ||
            (s.validation_error == best.validation_error && s.beta > best.beta))
            best = s;
    return best.beta;
}

BetaSelection select_beta(const Corpus &corpus, const PipelineConfig &config) {
    config.validate();
    if (!uses_posterior(config.method)) throw InvalidArgument("select_beta: method has no beta");
    if (config.beta_grid.empty()) throw InvalidArgument("select_beta: empty beta grid");
    if (config.beta_grid.size() == 1) return {config.beta_grid.front(), {}};

    require_labeled_train(corpus);
    const auto seeds = StageSeeds::from(config.seed);
    auto [fit, val] = split_train(corpus.train, config.validation_fraction, seeds.split);
    Corpus sub;
    sub.vocab = corpus.vocab;
    sub.train = std::move(fit);
    sub.test = std::move(val);
    sub.unlabeled = corpus.unlabeled;

    const auto bow = fit_bow_svm(sub, config);
    std::vector<BetaScore> scores(config.beta_grid.size());
    parallel_for(scores.size(), config.threads, [&](std::size_t i) {
        const double beta = config.beta_grid[i];
        auto stages = fit_ae_stages(sub, config, bow, beta);
        scores[i] = {beta, evaluate_features(stages.ae, sub, config).test_error};
        log::info("beta " + detail::format_double(beta) + " validation error " +
                  detail::format_double(scores[i].validation_error));
    });
    return {choose_beta(scores), std::move(scores)};
}

// ---------------------------------------------------------------------------

namespace {

void write_run_dir(const std::filesystem::path &dir, const RunReport &report, const RunArtifacts &a) {
    std::filesystem::create_directories(dir);
    nlohmann::json files = nlohmann::json::object();
    auto put = [&](const char *key, const char *name, const auto &model) {
        save(dir / name, model);
        files[key] = name;
    };
    if (a.bow_svm) put("bow_svm", "bow_svm.model", *a.bow_svm);
    if (a.posterior) put("posterior", "posterior.model", *a.posterior);
    if (a.autoencoder) put("autoencoder", "autoencoder.model", *a.autoencoder);
    if (a.finetuned) put("finetuned", "finetuned.model", *a.finetuned);
    if (a.feature_svm) put("feature_svm", "feature_svm.model", *a.feature_svm);
    {
        auto out = detail::open_out(dir / "report.jsonl");
        write_report_records(out, {report});
        detail::finish_write(out, dir / "report.jsonl");
        files["report"] = "report.jsonl";
    }
    nlohmann::json manifest{{"format", "sbdae-run v1"},
                            {"method", method_name(report.method)},
                            {"seed", report.config.seed},
                            {"files", files},
                            {"config", nlohmann::json::parse(config_json(report.config))}};
    auto out = detail::open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    detail::finish_write(out, dir / "manifest.json");
}

}  // namespace

RunReport run(const Corpus &corpus, const PipelineConfig &config, const RunOptions &options) {
    config.validate();
    require_labeled_train(corpus);
    const auto t0 = std::chrono::steady_clock::now();

    RunReport report;
    report.method = config.method;
    report.config = config;
    report.n_features = corpus.dim();
    report.n_train = corpus.train.size();
    report.n_test = corpus.test.size();
    report.n_unlabeled_used = uses_autoencoder(config.method) && config.use_unlabeled ? corpus.unlabeled.size() : 0;

    RunArtifacts local;
    RunArtifacts &art = options.artifacts ? *options.artifacts : local;
    art = {};

    auto stage = [&](const char *name, auto &&fn) {
        try {
            log::info(std::string("stage ") + name);
            return fn();
        } catch (const Error &e) {
            log::error(std::string("stage ") + name + " failed: " + e.what());
            throw;
        }
    };

    if (config.method == Method::bow || uses_posterior(config.method))
        art.bow_svm = stage("svm-bow", [&] { return fit_bow_svm(corpus, config); });

    if (config.method == Method::bow) {
        report.train_error = error_rate(*art.bow_svm, corpus.train);
        report.test_error = corpus.test.empty() ? 0.0 : error_rate(*art.bow_svm, corpus.test);
    } else {
        std::optional<double> beta;
        if (uses_posterior(config.method)) {
            auto sel = stage("select-beta", [&] { return select_beta(corpus, config); });
            beta = sel.chosen_beta;
            report.chosen_beta = sel.chosen_beta;
            report.beta_scores = std::move(sel.scores);
        }
        auto stages = stage("autoencoder", [&] { return fit_ae_stages(corpus, config, art.bow_svm, beta); });
        art.posterior = std::move(stages.posterior);
        art.finetuned = std::move(stages.finetuned);
        art.autoencoder = std::move(stages.ae);
        auto ev = stage("evaluate", [&] { return evaluate_features(*art.autoencoder, corpus, config); });
        art.feature_svm = std::move(ev.classifier);
        report.train_error = ev.train_error;
        report.test_error = ev.test_error;
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (options.run_dir) write_run_dir(*options.run_dir, report, art);
    return report;
}

std::vector<RunReport> compare(const Corpus &corpus, const std::vector<PipelineConfig> &configs) {
    if (configs.empty()) throw InvalidArgument("compare: no configurations");
    std::vector<RunReport> out;
    out.reserve(configs.size());
    for (const auto &c : configs) out.push_back(run(corpus, c));
    return out;
}

// ---------------------------------------------------------------------------
// Reports

std::string config_json(const PipelineConfig &c) {
    auto sgd = [](const SgdConfig &s) {
        return nlohmann::json{{"learning_rate", s.learning_rate},
                              {"momentum", s.momentum},
                              {"epochs", s.epochs},
                              {"batch_size", s.batch_size}};
    };
    nlohmann::json j{{"method", method_name(c.method)},
                     {"beta_grid", c.beta_grid},
                     {"use_unlabeled", c.use_unlabeled},
                     {"hidden_size", c.effective_hidden()},
                     {"noise_rate", c.noise_rate},
                     {"svm_sgd", sgd(c.svm_sgd)},
                     {"ae_sgd", sgd(c.ae_sgd)},
                     {"finetune_sgd", sgd(c.finetune_sgd)},
                     {"lambda_bow", c.lambda_bow},
                     {"lambda_features", c.lambda_features},
                     {"epsilon_floor", c.epsilon_floor},
                     {"exact_hessian", c.exact_hessian},
                     {"validation_fraction", c.validation_fraction},
                     {"seed", c.seed}};
    return j.dump();
}

PipelineConfig config_from_json(std::string_view text, PipelineConfig c) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config: expected a JSON object");
    auto sgd = [](const nlohmann::json &v, SgdConfig &s, const std::string &key) {
        if (!v.is_object()) throw InvalidArgument("config: " + key + " must be an object");
        for (const auto &[k, x] : v.items()) {
            if (k == "learning_rate") s.learning_rate = x.get<double>();
            else if (k == "momentum") s.momentum = x.get<double>();
            else if (k == "epochs") s.epochs = x.get<std::size_t>();
            else if (k == "batch_size") s.batch_size = x.get<std::size_t>();
            else throw InvalidArgument("config: unknown key " + key + "." + k);
        }
    };
    try {
        for (const auto &[k, v] : j.items()) {
            if (k == "method") c.method = parse_method(v.get<std::string>());
            else if (k == "beta_grid") c.beta_grid = v.get<std::vector<double>>();
            else if (k == "use_unlabeled") c.use_unlabeled = v.get<bool>();
            else if (k == "hidden_size") c.hidden_size = v.get<std::size_t>();
            else if (k == "noise_rate") c.noise_rate = v.get<double>();
            else if (k == "svm_sgd") sgd(v, c.svm_sgd, k);
            else if (k == "ae_sgd") sgd(v, c.ae_sgd, k);
            else if (k == "finetune_sgd") sgd(v, c.finetune_sgd, k);
            else if (k == "lambda_bow") c.lambda_bow = v.get<double>();
            else if (k == "lambda_features") c.lambda_features = v.get<double>();
            else if (k == "epsilon_floor") c.epsilon_floor = v.get<double>();
            else if (k == "exact_hessian") c.exact_hessian = v.get<bool>();
            else if (k == "validation_fraction") c.validation_fraction = v.get<double>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else if (k == "threads") c.threads = v.get<std::size_t>();
            else throw InvalidArgument("config: unknown key " + k);
        }
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    return c;
}

void write_report_records(std::ostream &out, const std::vector<RunReport> &reports, bool include_timing) {
    for (const auto &r : reports) {
        nlohmann::json j{{"method", method_name(r.method)},
                         {"train_error", r.train_error},
                         {"test_error", r.test_error},
                         {"n_features", r.n_features},
                         {"n_train", r.n_train},
                         {"n_test", r.n_test},
                         {"n_unlabeled_used", r.n_unlabeled_used},
                         {"config", nlohmann::json::parse(config_json(r.config))}};
        j["chosen_beta"] = r.chosen_beta ? nlohmann::json(*r.chosen_beta) : nlohmann::json(nullptr);
        auto scores = nlohmann::json::array();
        for (const auto &s : r.beta_scores) scores.push_back({{"beta", s.beta}, {"validation_error", s.validation_error}});
        j["beta_scores"] = scores;
        if (include_timing) j["seconds"] = r.seconds;
        out << j.dump() << '\n';
    }
}

void render_reports(std::ostream &out, const std::vector<RunReport> &reports) {
    out << std::left << std::setw(10) << "method" << std::right << std::setw(12) << "train err %"
        << std::setw(12) << "test err %" << std::setw(10) << "beta" << std::setw(8) << "k"
        << std::setw(11) << "unlabeled" << '\n';
    for (const auto &r : reports) {
        std::ostringstream beta;
        if (r.chosen_beta) beta << std::setprecision(3) << *r.chosen_beta;
        else beta << "-";
        out << std::left << std::setw(10) << method_name(r.method) << std::right << std::fixed
            << std::setprecision(2) << std::setw(12) << 100.0 * r.train_error << std::setw(12)
            << 100.0 * r.test_error << std::setw(10) << beta.str() << std::setw(8)
            << (uses_autoencoder(r.method) ? std::to_string(r.config.effective_hidden()) : std::string("-"))
            << std::setw(11) << r.n_unlabeled_used << '\n';
        out.unsetf(std::ios::fixed);
    }
}

}  // namespace sbdae
