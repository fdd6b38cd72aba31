// sbdae command-line tool. Every subcommand is a thin adapter over the
// library; nothing numerical happens here.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sbdae/autoencoder.hpp"
#include "sbdae/corpus.hpp"
#include "sbdae/error.hpp"
#include "sbdae/inspect.hpp"
#include "sbdae/log.hpp"
#include "sbdae/pipeline.hpp"
#include "sbdae/posterior.hpp"
#include "sbdae/svm2.hpp"
#include "sbdae/synthetic.hpp"

namespace fs = std::filesystem;
using namespace sbdae;

namespace {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_io = 2, exit_numerical = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Paths can come from the config file, the environment or flags (in rising
// priority). Everything else comes from the config file or flags.
struct Settings {
    PipelineConfig config;
    std::string train, test, unlabeled, vocab, model_out, report_out, run_dir;
    std::string log_level = "warn";
    std::size_t min_df = 0;
};

struct PathKey {
    const char *key;
    const char *env;
    std::string Settings::*field;
};

const PathKey path_keys[] = {
    {"train", "SBDAE_TRAIN", &Settings::train},
    {"test", "SBDAE_TEST", &Settings::test},
    {"unlabeled", "SBDAE_UNLABELED", &Settings::unlabeled},
    {"vocab", "SBDAE_VOCAB", &Settings::vocab},
    {"model_out", "SBDAE_MODEL_OUT", &Settings::model_out},
    {"report_out", "SBDAE_REPORT_OUT", &Settings::report_out},
    {"run_dir", "SBDAE_RUN_DIR", &Settings::run_dir},
};

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_config_file(const fs::path &path, Settings &s) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(slurp(path));
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError(path.string() + ": expected a JSON object");
    try {
        for (const auto &pk : path_keys)
            if (j.contains(pk.key)) {
                s.*pk.field = j[pk.key].get<std::string>();
                j.erase(pk.key);
            }
        if (j.contains("log_level")) {
            s.log_level = j["log_level"].get<std::string>();
            j.erase("log_level");
        }
        if (j.contains("min_df")) {
            s.min_df = j["min_df"].get<std::size_t>();
            j.erase("min_df");
        }
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(path.string() + ": " + e.what());
    }
    try {
        s.config = config_from_json(j.dump(), s.config);
    } catch (const InvalidArgument &e) {
        throw UsageError(path.string() + ": " + e.what());
    }
}

void apply_env(Settings &s) {
    for (const auto &pk : path_keys)
        if (const char *v = std::getenv(pk.env); v && *v) s.*pk.field = v;
}

// Flags are bound to scratch storage and copied into Settings only when given,
// so they override the config file without clobbering it with defaults.
class Flags {
public:
    explicit Flags(CLI::App *app) : app_(app) {}

    template <class T>
    CLI::Option *opt(const std::string &name, const std::string &desc, std::function<void(Settings &, const T &)> set) {
        auto store = std::make_shared<T>();
        auto *o = app_->add_option(name, *store, desc);
        setters_.push_back({o, [store, set](Settings &s) { set(s, *store); }});
        return o;
    }

    CLI::Option *flag(const std::string &name, const std::string &desc, std::function<void(Settings &)> set) {
        auto *o = app_->add_flag(name, desc);
        setters_.push_back({o, [set](Settings &s) { set(s); }});
        return o;
    }

    CLI::Option *path(const std::string &name, const std::string &desc, std::string Settings::*field) {
        return opt<std::string>(name, desc, [field](Settings &s, const std::string &v) { s.*field = v; });
    }

    void apply(Settings &s) const {
        for (const auto &[o, fn] : setters_)
            if (o->count() > 0) fn(s);
    }

    CLI::App *app() const { return app_; }

private:
    CLI::App *app_;
    std::vector<std::pair<CLI::Option *, std::function<void(Settings &)>>> setters_;
};

struct Command {
    CLI::App *app;
    std::unique_ptr<Flags> flags;
    std::string config_file;
};

void add_common(Command &c) {
    c.app->add_option("--config", c.config_file, "JSON config file (flags take precedence)");
    c.flags->opt<std::uint64_t>("--seed", "master seed; every stage seed is derived from it",
                                [](Settings &s, const std::uint64_t &v) { s.config.seed = v; });
    c.flags->opt<std::size_t>("--threads", "worker threads for the beta search",
                              [](Settings &s, const std::size_t &v) { s.config.threads = v; })
        ->check(CLI::PositiveNumber);
    c.flags->opt<std::string>("--log-level", "debug, info, warn, error or off",
                              [](Settings &s, const std::string &v) { s.log_level = v; });
}

void add_sgd(Flags &f, const std::string &prefix, const std::string &what, SgdConfig PipelineConfig::*field) {
    f.opt<double>("--" + prefix + "-lr", what + " learning rate",
                  [field](Settings &s, const double &v) { (s.config.*field).learning_rate = v; });
    f.opt<double>("--" + prefix + "-momentum", what + " momentum",
                  [field](Settings &s, const double &v) { (s.config.*field).momentum = v; });
    f.opt<std::size_t>("--" + prefix + "-epochs", what + " epochs",
                       [field](Settings &s, const std::size_t &v) { (s.config.*field).epochs = v; });
    f.opt<std::size_t>("--" + prefix + "-batch", what + " minibatch size",
                       [field](Settings &s, const std::size_t &v) { (s.config.*field).batch_size = v; });
}

void add_method(Flags &f) {
    f.opt<std::string>("--method", "bow, dae, dae+, sbdae or sbdae+",
                       [](Settings &s, const std::string &v) { s.config.method = parse_method(v); });
}

void add_beta_grid(Flags &f) {
    f.opt<std::vector<double>>("--beta-grid", "comma-separated beta values",
                               [](Settings &s, const std::vector<double> &v) { s.config.beta_grid = v; })
        ->delimiter(',');
    f.opt<double>("--validation-fraction", "held-out share of train for choosing beta",
                  [](Settings &s, const double &v) { s.config.validation_fraction = v; });
}

void add_posterior_opts(Flags &f) {
    f.opt<double>("--epsilon-floor", "floor on the curvature before inverting",
                  [](Settings &s, const double &v) { s.config.epsilon_floor = v; });
    f.flag("--exact-hessian", "add the 2*lambda ridge term to the curvature",
           [](Settings &s) { s.config.exact_hessian = true; });
}

void add_ae_opts(Flags &f) {
    f.opt<std::size_t>("--hidden", "hidden units (0 = method default)",
                       [](Settings &s, const std::size_t &v) { s.config.hidden_size = v; });
    f.opt<double>("--noise", "masking noise rate",
                  [](Settings &s, const double &v) { s.config.noise_rate = v; });
    f.flag("--use-unlabeled", "also train the autoencoder on the unlabeled split",
           [](Settings &s) { s.config.use_unlabeled = true; });
    add_sgd(f, "ae", "autoencoder", &PipelineConfig::ae_sgd);
    add_sgd(f, "ft", "finetuning", &PipelineConfig::finetune_sgd);
}

void add_svm_opts(Flags &f) {
    add_sgd(f, "svm", "SVM2", &PipelineConfig::svm_sgd);
    f.opt<double>("--lambda-bow", "L2 penalty of the bag-of-words SVM2",
                  [](Settings &s, const double &v) { s.config.lambda_bow = v; });
    f.opt<double>("--lambda-features", "L2 penalty of the SVM2 on hidden features",
                  [](Settings &s, const double &v) { s.config.lambda_features = v; });
}

void add_corpus_paths(Flags &f, bool with_unlabeled = true) {
    f.path("--train", "labeled training docs (sparse format)", &Settings::train);
    f.path("--test", "labeled test docs", &Settings::test);
    if (with_unlabeled) f.path("--unlabeled", "unlabeled docs", &Settings::unlabeled);
    f.path("--vocab", "vocabulary file (id, token, df)", &Settings::vocab);
}

Settings resolve(const Command &c) {
    Settings s;
    if (!c.config_file.empty()) apply_config_file(c.config_file, s);
    apply_env(s);
    c.flags->apply(s);
    log::set_level(log::parse_level(s.log_level));
    return s;
}

void require(const std::string &value, const char *flag) {
    if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

void require_exists(const std::string &path) {
    if (!path.empty() && !fs::exists(path)) throw IoError("no such file: " + path);
}

Corpus load_corpus(const Settings &s) {
    require(s.train, "--train");
    for (const auto *p : {&s.train, &s.test, &s.unlabeled, &s.vocab}) require_exists(*p);
    std::vector<std::string> tokens;
    if (!s.vocab.empty()) tokens = read_vocabulary(s.vocab).tokens();
    auto corpus = assemble_corpus(parse_sparse(s.train), s.test.empty() ? Docs{} : parse_sparse(s.test),
                                  s.unlabeled.empty() ? Docs{} : parse_sparse(s.unlabeled), std::move(tokens));
    if (s.min_df > 0) corpus = prepare(corpus, s.min_df);
    log::info("corpus: " + std::to_string(corpus.dim()) + " features, " + std::to_string(corpus.train.size()) +
              " train, " + std::to_string(corpus.test.size()) + " test, " +
              std::to_string(corpus.unlabeled.size()) + " unlabeled");
    return corpus;
}

// Writes to --report-out when given, stdout otherwise.
void emit(const Settings &s, const std::function<void(std::ostream &)> &write) {
    if (s.report_out.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(s.report_out, std::ios::binary);
    if (!out) throw IoError("cannot write " + s.report_out);
    write(out);
    if (!out) throw IoError("write failed: " + s.report_out);
}

void check_format(const std::string &format) {
    if (format != "text" && format != "jsonl") throw UsageError("--format must be text or jsonl");
}

std::string fmt_error(double e) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2) << 100.0 * e << '%';
    return ss.str();
}

void emit_errors(const Settings &s, const std::string &format, const std::string &what, double train_error,
                 std::optional<double> test_error) {
    emit(s, [&](std::ostream &out) {
        if (format == "jsonl") {
            nlohmann::json j{{"model", what}, {"train_error", train_error}};
            j["test_error"] = test_error ? nlohmann::json(*test_error) : nlohmann::json(nullptr);
            out << j.dump() << '\n';
        } else {
            out << what << ": train error " << fmt_error(train_error);
            if (test_error) out << ", test error " << fmt_error(*test_error);
            out << '\n';
        }
    });
}

// --- subcommands --------------------------------------------------------------

struct PrepArgs {
    std::string out_dir, tokens;
};

void cmd_prep(const Command &c, const PrepArgs &a) {
    auto s = resolve(c);
    require(s.train, "--train");
    require(a.out_dir, "--out-dir");
    if (s.min_df == 0) s.min_df = 1;
    for (const std::string *p : std::initializer_list<const std::string *>{&s.train, &s.test, &s.unlabeled, &a.tokens})
        require_exists(*p);
    std::vector<std::string> tokens;
    if (!a.tokens.empty()) tokens = read_token_list(a.tokens);
    auto raw = assemble_corpus(parse_sparse(s.train), s.test.empty() ? Docs{} : parse_sparse(s.test),
                               s.unlabeled.empty() ? Docs{} : parse_sparse(s.unlabeled), std::move(tokens));
    auto corpus = prepare(raw, s.min_df);
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    write_sparse(dir / "train.svm", corpus.train);
    if (!s.test.empty()) write_sparse(dir / "test.svm", corpus.test);
    if (!s.unlabeled.empty()) write_sparse(dir / "unlabeled.svm", corpus.unlabeled);
    write_vocabulary(dir / "vocab.tsv", corpus.vocab);
    std::cout << "kept " << corpus.dim() << " of " << raw.dim() << " features (min_df " << s.min_df << "); "
              << corpus.train.size() << " train, " << corpus.test.size() << " test, " << corpus.unlabeled.size()
              << " unlabeled\n";
}

struct SynthArgs {
    std::string out_dir;
    PlantedCorpusSpec spec;
};

void cmd_synth(const Command &c, SynthArgs a) {
    auto s = resolve(c);
    require(a.out_dir, "--out-dir");
    a.spec.seed = s.config.seed;
    auto planted = make_planted_corpus(a.spec);
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    write_sparse(dir / "train.svm", planted.corpus.train);
    write_sparse(dir / "test.svm", planted.corpus.test);
    if (!planted.corpus.unlabeled.empty()) write_sparse(dir / "unlabeled.svm", planted.corpus.unlabeled);
    {
        std::ofstream out(dir / "tokens.txt", std::ios::binary);
        for (const auto &t : planted.corpus.vocab.tokens()) out << t << '\n';
        if (!out) throw IoError("write failed: " + (dir / "tokens.txt").string());
    }
    std::ofstream out(dir / "planted.txt", std::ios::binary);
    for (auto id : planted.positive) out << "+1\t" << planted.corpus.vocab.token(id) << '\n';
    for (auto id : planted.negative) out << "-1\t" << planted.corpus.vocab.token(id) << '\n';
    if (!out) throw IoError("write failed: " + (dir / "planted.txt").string());
    std::cout << "wrote planted corpus to " << dir.string() << '\n';
}

void cmd_train_svm(const Command &c, const std::string &format) {
    auto s = resolve(c);
    require(s.model_out, "--out");
    auto corpus = load_corpus(s);
    auto model = fit_bow_svm(corpus, s.config);
    save(fs::path(s.model_out), model);
    emit_errors(s, format, "svm2", error_rate(model, corpus.train),
                corpus.test.empty() ? std::nullopt : std::optional(error_rate(model, corpus.test)));
}

struct PosteriorArgs {
    std::string svm;
    double beta = 0.0;
};

void cmd_build_posterior(const Command &c, const PosteriorArgs &a) {
    auto s = resolve(c);
    require(a.svm, "--svm");
    require(s.model_out, "--out");
    require_exists(a.svm);
    if (!(a.beta > 0.0)) throw UsageError("--beta must be positive");
    auto corpus = load_corpus(s);
    auto svm = load_linear_model(fs::path(a.svm));
    if (svm.dim() != corpus.dim())
        throw InvalidArgument("model has " + std::to_string(svm.dim()) + " features, corpus has " +
                              std::to_string(corpus.dim()));
    save(fs::path(s.model_out), fit_posterior(svm, corpus, a.beta, s.config));
}

struct TrainAeArgs {
    std::string posterior, finetuned_out;
};

void cmd_train_ae(const Command &c, const TrainAeArgs &a) {
    auto s = resolve(c);
    require(s.model_out, "--out");
    if (s.config.method == Method::bow) throw UsageError("train-ae needs --method dae, dae+, sbdae or sbdae+");
    std::optional<Posterior> post;
    if (uses_posterior(s.config.method)) {
        require(a.posterior, "--posterior");
        require_exists(a.posterior);
        post = load_posterior(fs::path(a.posterior));
    }
    auto corpus = load_corpus(s);
    auto ae = fit_autoencoder(corpus, s.config, post);
    if (uses_finetune(s.config.method)) {
        auto clf = fit_finetune(ae, corpus, s.config);
        if (!a.finetuned_out.empty()) save(fs::path(a.finetuned_out), clf);
        ae = with_encoder(ae, clf);
    }
    save(fs::path(s.model_out), ae);
}

struct ExtractArgs {
    std::string ae, input;
};

void cmd_extract(const Command &c, const ExtractArgs &a) {
    auto s = resolve(c);
    require(a.ae, "--ae");
    require(a.input, "--input");
    require(s.model_out, "--out");
    require_exists(a.ae);
    require_exists(a.input);
    auto ae = load_ae_model(fs::path(a.ae));
    auto docs = parse_sparse(fs::path(a.input));
    write_sparse(fs::path(s.model_out), features_as_docs(extract_features(ae, docs), docs));
}

struct EvaluateArgs {
    std::string ae, svm, format = "text";
};

void cmd_evaluate(const Command &c, const EvaluateArgs &a) {
    auto s = resolve(c);
    check_format(a.format);
    if (a.ae.empty() == a.svm.empty()) throw UsageError("give exactly one of --ae or --svm");
    require_exists(a.ae);
    require_exists(a.svm);
    auto corpus = load_corpus(s);
    if (!a.svm.empty()) {
        auto model = load_linear_model(fs::path(a.svm));
        emit_errors(s, a.format, "svm2", error_rate(model, corpus.train),
                    corpus.test.empty() ? std::nullopt : std::optional(error_rate(model, corpus.test)));
        return;
    }
    auto ae = load_ae_model(fs::path(a.ae));
    auto ev = evaluate_features(ae, corpus, s.config);
    if (!s.model_out.empty()) save(fs::path(s.model_out), ev.classifier);
    emit_errors(s, a.format, "features", ev.train_error,
                corpus.test.empty() ? std::nullopt : std::optional(ev.test_error));
}

struct InspectArgs {
    std::string ae, format = "text";
    std::size_t k_top = 10, filters = 8;
};

void cmd_inspect(const Command &c, const InspectArgs &a) {
    auto s = resolve(c);
    check_format(a.format);
    require(a.ae, "--ae");
    require(s.vocab, "--vocab");
    require_exists(a.ae);
    require_exists(s.vocab);
    auto ae = load_ae_model(fs::path(a.ae));
    auto reports = top_words(ae, read_vocabulary(s.vocab), a.k_top, std::min(a.filters, ae.hidden()));
    emit(s, [&](std::ostream &out) {
        if (a.format == "jsonl") write_filter_records(out, reports);
        else render_filters(out, reports);
    });
}

struct ReportArgs {
    std::string format = "text";
    bool timing = false;
};

void write_reports(const Settings &s, const ReportArgs &a, const std::vector<RunReport> &reports) {
    emit(s, [&](std::ostream &out) {
        if (a.format == "jsonl") write_report_records(out, reports, a.timing);
        else render_reports(out, reports);
    });
}

void cmd_pipeline(const Command &c, const ReportArgs &a) {
    auto s = resolve(c);
    check_format(a.format);
    auto corpus = load_corpus(s);
    RunOptions options;
    if (!s.run_dir.empty()) options.run_dir = fs::path(s.run_dir);
    write_reports(s, a, {run(corpus, s.config, options)});
}

void cmd_compare(const Command &c, const ReportArgs &a, const std::vector<std::string> &methods) {
    auto s = resolve(c);
    check_format(a.format);
    if (methods.empty()) throw UsageError("--methods must not be empty");
    std::vector<PipelineConfig> configs;
    for (const auto &m : methods) {
        configs.push_back(s.config);
        configs.back().method = parse_method(m);
    }
    auto corpus = load_corpus(s);
    write_reports(s, a, compare(corpus, configs));
}

int report_failure(int code, const std::string &message) {
    std::cerr << "sbdae: " << message << '\n';
    return code;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Semisupervised Bregman denoising autoencoders for sentiment classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "sbdae 0.1.0");

    std::vector<Command> commands;
    commands.reserve(16);
    auto command = [&](const std::string &name, const std::string &desc) -> Command & {
        auto *sub = app.add_subcommand(name, desc);
        commands.push_back({sub, std::make_unique<Flags>(sub), {}});
        add_common(commands.back());
        return commands.back();
    };
    std::function<void()> action;

    auto &prep = command("prep", "prune rare features and normalize raw count files");
    PrepArgs prep_args;
    add_corpus_paths(*prep.flags);
    prep.app->remove_option(prep.app->get_option("--vocab"));
    prep.app->add_option("--tokens", prep_args.tokens, "token list for the raw files, one per line");
    prep.app->add_option("--out-dir", prep_args.out_dir, "where train.svm, test.svm, unlabeled.svm, vocab.tsv go");
    prep.flags->opt<std::size_t>("--min-df", "minimum training document frequency (default 1)",
                                 [](Settings &s, const std::size_t &v) { s.min_df = v; })
        ->check(CLI::PositiveNumber);
    prep.app->callback([&] { action = [&] { cmd_prep(prep, prep_args); }; });

    auto &synth = command("synth", "write a planted-polarity corpus (raw counts)");
    SynthArgs synth_args;
    synth.app->add_option("--out-dir", synth_args.out_dir, "output directory");
    synth.app->add_option("--vocab-size", synth_args.spec.vocab_size, "vocabulary size");
    synth.app->add_option("--n-train", synth_args.spec.n_train, "labeled training docs");
    synth.app->add_option("--n-test", synth_args.spec.n_test, "test docs");
    synth.app->add_option("--n-unlabeled", synth_args.spec.n_unlabeled, "unlabeled docs");
    synth.app->add_option("--polar", synth_args.spec.n_polar_per_class, "planted words per class");
    synth.app->add_option("--label-noise", synth_args.spec.label_noise, "label flip probability");
    synth.app->callback([&] { action = [&] { cmd_synth(synth, synth_args); }; });

    auto &train_svm = command("train-svm", "train SVM2 on bag-of-words features");
    std::string train_svm_format = "text";
    add_corpus_paths(*train_svm.flags, false);
    add_svm_opts(*train_svm.flags);
    train_svm.flags->path("--out", "model file", &Settings::model_out);
    train_svm.flags->path("--report-out", "report file (default stdout)", &Settings::report_out);
    train_svm.app->add_option("--format", train_svm_format, "text or jsonl");
    train_svm.app->callback([&] { action = [&] {
        check_format(train_svm_format);
        cmd_train_svm(train_svm, train_svm_format);
    }; });

    auto &posterior = command("build-posterior", "Gaussian weight posterior around a trained SVM2");
    PosteriorArgs posterior_args;
    add_corpus_paths(*posterior.flags, false);
    add_posterior_opts(*posterior.flags);
    posterior.app->add_option("--svm", posterior_args.svm, "model from train-svm");
    posterior.app->add_option("--beta", posterior_args.beta, "temperature");
    posterior.flags->path("--out", "posterior file", &Settings::model_out);
    posterior.app->callback([&] { action = [&] { cmd_build_posterior(posterior, posterior_args); }; });

    auto &train_ae = command("train-ae", "train the denoising autoencoder (and finetune for dae+/sbdae+)");
    TrainAeArgs train_ae_args;
    add_corpus_paths(*train_ae.flags);
    add_method(*train_ae.flags);
    add_ae_opts(*train_ae.flags);
    train_ae.app->add_option("--posterior", train_ae_args.posterior, "posterior file (sbdae, sbdae+)");
    train_ae.app->add_option("--finetuned-out", train_ae_args.finetuned_out, "also save the softmax classifier");
    train_ae.flags->path("--out", "autoencoder file", &Settings::model_out);
    train_ae.app->callback([&] { action = [&] { cmd_train_ae(train_ae, train_ae_args); }; });

    auto &extract = command("extract", "hidden-layer features of a document file");
    ExtractArgs extract_args;
    extract.app->add_option("--ae", extract_args.ae, "autoencoder file");
    extract.app->add_option("--input", extract_args.input, "documents (sparse format)");
    extract.flags->path("--out", "feature file (sparse format, labels kept)", &Settings::model_out);
    extract.app->callback([&] { action = [&] { cmd_extract(extract, extract_args); }; });

    auto &evaluate = command("evaluate", "error rates of an SVM2 model, or of SVM2 on autoencoder features");
    EvaluateArgs evaluate_args;
    add_corpus_paths(*evaluate.flags, false);
    add_svm_opts(*evaluate.flags);
    evaluate.app->add_option("--ae", evaluate_args.ae, "autoencoder file (trains SVM2 on its features)");
    evaluate.app->add_option("--svm", evaluate_args.svm, "linear model file (applied as is)");
    evaluate.app->add_option("--format", evaluate_args.format, "text or jsonl");
    evaluate.flags->path("--model-out", "save the feature SVM2", &Settings::model_out);
    evaluate.flags->path("--report-out", "report file (default stdout)", &Settings::report_out);
    evaluate.app->callback([&] { action = [&] { cmd_evaluate(evaluate, evaluate_args); }; });

    auto &inspect = command("inspect", "most activated and deactivated words per hidden unit");
    InspectArgs inspect_args;
    inspect.app->add_option("--ae", inspect_args.ae, "autoencoder file");
    inspect.flags->path("--vocab", "vocabulary file", &Settings::vocab);
    inspect.app->add_option("--k-top", inspect_args.k_top, "words per list")->check(CLI::PositiveNumber);
    inspect.app->add_option("--filters", inspect_args.filters, "number of hidden units to show")
        ->check(CLI::PositiveNumber);
    inspect.app->add_option("--format", inspect_args.format, "text or jsonl");
    inspect.flags->path("--report-out", "output file (default stdout)", &Settings::report_out);
    inspect.app->callback([&] { action = [&] { cmd_inspect(inspect, inspect_args); }; });

    auto add_run_opts = [](Command &c, ReportArgs &r) {
        add_corpus_paths(*c.flags);
        add_beta_grid(*c.flags);
        add_ae_opts(*c.flags);
        add_svm_opts(*c.flags);
        add_posterior_opts(*c.flags);
        c.flags->opt<std::size_t>("--min-df", "prune and normalize the inputs first (0 = use as is)",
                                  [](Settings &s, const std::size_t &v) { s.min_df = v; });
        c.flags->path("--report-out", "report file (default stdout)", &Settings::report_out);
        c.app->add_option("--format", r.format, "text or jsonl");
        c.app->add_flag("--timing", r.timing, "include wall-clock seconds in jsonl reports");
    };

    auto &pipeline = command("pipeline", "run one method end to end");
    ReportArgs pipeline_args;
    add_method(*pipeline.flags);
    add_run_opts(pipeline, pipeline_args);
    pipeline.flags->path("--run-dir", "write every model plus report and manifest here", &Settings::run_dir);
    pipeline.app->callback([&] { action = [&] { cmd_pipeline(pipeline, pipeline_args); }; });

    auto &cmp = command("compare", "run several methods on the same data");
    ReportArgs compare_args;
    std::vector<std::string> methods{"bow", "dae", "dae+", "sbdae", "sbdae+"};
    add_run_opts(cmp, compare_args);
    cmp.app->add_option("--methods", methods, "comma-separated methods")->delimiter(',');
    cmp.app->callback([&] { action = [&] { cmd_compare(cmp, compare_args, methods); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        action();
        return exit_ok;
    } catch (const UsageError &e) {
        return report_failure(exit_usage, e.what());
    } catch (const InvalidArgument &e) {
        return report_failure(exit_usage, e.what());
    } catch (const NumericalError &e) {
        return report_failure(exit_numerical, std::string("numerical failure: ") + e.what());
    } catch (const IoError &e) {
        return report_failure(exit_io, e.what());
    } catch (const ParseError &e) {
        return report_failure(exit_io, e.what());
    } catch (const fs::filesystem_error &e) {
        return report_failure(exit_io, e.what());
    } catch (const std::exception &e) {
        return report_failure(exit_usage, e.what());
    }
}
