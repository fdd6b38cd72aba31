#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sbdae/autoencoder.hpp"
#include "sbdae/corpus.hpp"
#include "sbdae/error.hpp"
#include "sbdae/inspect.hpp"
#include "sbdae/log.hpp"
#include "sbdae/pipeline.hpp"
#include "sbdae/posterior.hpp"
#include "sbdae/svm2.hpp"
#include "sbdae/synthetic.hpp"

namespace py = pybind11;
using namespace sbdae;

namespace {

const Docs &split(const Corpus &c, const std::string &name) {
    if (name == "train") return c.train;
    if (name == "test") return c.test;
    if (name == "unlabeled") return c.unlabeled;
    throw InvalidArgument("split must be train, test or unlabeled");
}

py::array_t<double> to_array(const Matrix &m) {
    py::array_t<double> out({m.rows, m.cols});
    std::copy(m.data.begin(), m.data.end(), out.mutable_data());
    return out;
}

std::string report_json(const RunReport &r) {
    std::ostringstream out;
    write_report_records(out, {r}, true);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_sbdae, m) {
    m.doc() = "Bregman-loss denoising autoencoders for sentiment classification (C++ core)";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("set_log_level", [](const std::string &level) { log::set_level(log::parse_level(level)); });

    py::class_<Corpus>(m, "Corpus")
        .def_property_readonly("dim", &Corpus::dim)
        .def_property_readonly("n_train", [](const Corpus &c) { return c.train.size(); })
        .def_property_readonly("n_test", [](const Corpus &c) { return c.test.size(); })
        .def_property_readonly("n_unlabeled", [](const Corpus &c) { return c.unlabeled.size(); })
        .def_property_readonly("tokens", [](const Corpus &c) { return c.vocab.tokens(); })
        .def_property_readonly("doc_freq", [](const Corpus &c) { return c.vocab.doc_freq(); })
        .def("labels", [](const Corpus &c, const std::string &name) {
            std::vector<int> out;
            for (const auto &d : split(c, name)) out.push_back(d.label ? sign_of(*d.label) : 0);
            return out;
        }, py::arg("split") = "train")
        .def("dense", [](const Corpus &c, const std::string &name) {
            const auto &docs = split(c, name);
            py::array_t<double> out({docs.size(), c.dim()});
            auto *p = out.mutable_data();
            std::fill(p, p + docs.size() * c.dim(), 0.0);
            for (std::size_t i = 0; i < docs.size(); ++i)
                for (const auto &e : docs[i].entries) p[i * c.dim() + e.id] = e.value;
            return out;
        }, py::arg("split") = "train")
        .def("write", [](const Corpus &c, const std::filesystem::path &dir) {
            std::filesystem::create_directories(dir);
            write_sparse(dir / "train.svm", c.train);
            if (!c.test.empty()) write_sparse(dir / "test.svm", c.test);
            if (!c.unlabeled.empty()) write_sparse(dir / "unlabeled.svm", c.unlabeled);
            write_vocabulary(dir / "vocab.tsv", c.vocab);
        });

    m.def("load_corpus", [](const std::filesystem::path &train, std::optional<std::filesystem::path> test,
                            std::optional<std::filesystem::path> unlabeled, std::optional<std::filesystem::path> vocab) {
        std::vector<std::string> tokens;
        if (vocab) tokens = read_vocabulary(*vocab).tokens();
        return assemble_corpus(parse_sparse(train), test ? parse_sparse(*test) : Docs{},
                               unlabeled ? parse_sparse(*unlabeled) : Docs{}, std::move(tokens));
    }, py::arg("train"), py::arg("test") = py::none(), py::arg("unlabeled") = py::none(), py::arg("vocab") = py::none());

    m.def("planted_corpus", [](std::size_t vocab_size, std::size_t n_train, std::size_t n_test, std::size_t n_unlabeled,
                               std::size_t n_polar_per_class, double label_noise, std::uint64_t seed) {
        PlantedCorpusSpec spec;
        spec.vocab_size = vocab_size;
        spec.n_train = n_train;
        spec.n_test = n_test;
        spec.n_unlabeled = n_unlabeled;
        spec.n_polar_per_class = n_polar_per_class;
        spec.label_noise = label_noise;
        spec.seed = seed;
        auto p = make_planted_corpus(spec);
        std::vector<std::string> pos, neg;
        for (auto id : p.positive) pos.push_back(p.corpus.vocab.token(id));
        for (auto id : p.negative) neg.push_back(p.corpus.vocab.token(id));
        return py::make_tuple(p.corpus, pos, neg);
    }, py::arg("vocab_size") = 1000, py::arg("n_train") = 2000, py::arg("n_test") = 1000, py::arg("n_unlabeled") = 0,
       py::arg("n_polar_per_class") = 10, py::arg("label_noise") = 0.05, py::arg("seed") = 0,
       "Raw-count planted-polarity corpus plus its positive and negative tokens.");

    m.def("prepare", &prepare, py::arg("corpus"), py::arg("min_df") = 1);

    py::class_<LinearModel>(m, "LinearModel")
        .def_readonly("theta", &LinearModel::theta)
        .def_readonly("bias", &LinearModel::bias)
        .def_readonly("lambda_", &LinearModel::lambda)
        .def("error_rate", [](const LinearModel &lm, const Corpus &c, const std::string &name) {
            return error_rate(lm, split(c, name));
        }, py::arg("corpus"), py::arg("split") = "test")
        .def("save", [](const LinearModel &lm, const std::filesystem::path &p) { save(p, lm); });
    m.def("load_linear_model", py::overload_cast<const std::filesystem::path &>(&load_linear_model));

    py::class_<Posterior>(m, "Posterior")
        .def_readonly("theta_hat", &Posterior::theta_hat)
        .def_readonly("sigma_diag", &Posterior::sigma_diag)
        .def_readonly("beta", &Posterior::beta)
        .def("save", [](const Posterior &p, const std::filesystem::path &path) { save(path, p); });
    m.def("load_posterior", py::overload_cast<const std::filesystem::path &>(&load_posterior));

    py::class_<AeModel>(m, "AeModel")
        .def_property_readonly("input_dim", &AeModel::input_dim)
        .def_property_readonly("hidden", &AeModel::hidden)
        .def_property_readonly("loss", [](const AeModel &a) { return std::string(loss_name(a.loss)); })
        .def_property_readonly("W", [](const AeModel &a) { return to_array(a.W); })
        .def("features", [](const AeModel &a, const Corpus &c, const std::string &name) {
            return to_array(extract_features(a, split(c, name)));
        }, py::arg("corpus"), py::arg("split") = "test")
        .def("top_words", [](const AeModel &a, const Corpus &c, std::size_t k_top, std::size_t n_filters) {
            py::list out;
            for (const auto &r : top_words(a, c.vocab, k_top, n_filters)) {
                py::list act, deact;
                for (const auto &t : r.top_activated) act.append(py::make_tuple(t.token, t.weight));
                for (const auto &t : r.top_deactivated) deact.append(py::make_tuple(t.token, t.weight));
                py::dict d;
                d["filter"] = r.filter_index;
                d["activated"] = act;
                d["deactivated"] = deact;
                out.append(d);
            }
            return out;
        }, py::arg("corpus"), py::arg("k_top") = 10, py::arg("n_filters") = 8)
        .def("save", [](const AeModel &a, const std::filesystem::path &p) { save(p, a); });
    m.def("load_ae_model", py::overload_cast<const std::filesystem::path &>(&load_ae_model));

    m.def("default_config_json", [] { return config_json(PipelineConfig{}); });

    m.def("_run", [](const Corpus &c, const std::string &config, std::optional<std::filesystem::path> run_dir) {
        auto cfg = config_from_json(config);
        RunArtifacts art;
        RunOptions opts{run_dir, &art};
        RunReport r;
        {
            py::gil_scoped_release release;
            r = run(c, cfg, opts);
        }
        py::dict models;
        if (art.bow_svm) models["bow_svm"] = *art.bow_svm;
        if (art.posterior) models["posterior"] = *art.posterior;
        if (art.autoencoder) models["autoencoder"] = *art.autoencoder;
        if (art.feature_svm) models["feature_svm"] = *art.feature_svm;
        return py::make_tuple(report_json(r), models);
    });
}
