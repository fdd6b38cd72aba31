#include "sbdae/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sbdae/error.hpp"
#include "sbdae/log.hpp"
#include "text_io.hpp"

namespace sbdae {

double dot(const SparseDoc &doc, std::span<const double> dense) {
    double s = 0.0;
    for (const auto &e : doc.entries) s += e.value * dense[e.id];
    return s;
}

std::vector<double> to_dense(const SparseDoc &doc, std::size_t dim) {
    if (doc.min_dim() > dim) throw InvalidArgument("to_dense: doc has feature beyond dimension");
    std::vector<double> x(dim, 0.0);
    for (const auto &e : doc.entries) x[e.id] = e.value;
    return x;
}

void check_doc(const SparseDoc &doc, std::size_t dim) {
    for (std::size_t i = 0; i < doc.entries.size(); ++i) {
        const auto &e = doc.entries[i];
        if (i && e.id <= doc.entries[i - 1].id)
            throw InvalidArgument("doc feature ids not strictly increasing");
        if (e.id >= dim)
            throw InvalidArgument("feature id " + std::to_string(e.id) + " outside dimension " +
                                  std::to_string(dim));
        if (!(e.value > 0.0) || !std::isfinite(e.value))
            throw InvalidArgument("doc stores a zero, negative or non-finite value");
    }
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> doc_freq)
    : tokens_(std::move(tokens)) {
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        auto [it, fresh] = index_.emplace(tokens_[i], static_cast<FeatureId>(i));
        if (!fresh) throw InvalidArgument("duplicate token '" + tokens_[i] + "' in vocabulary");
    }
    set_doc_freq(std::move(doc_freq));
}

Vocabulary Vocabulary::anonymous(std::size_t size) {
    std::vector<std::string> tokens(size);
    for (std::size_t i = 0; i < size; ++i) tokens[i] = "w" + std::to_string(i + 1);
    return Vocabulary(std::move(tokens));
}

std::optional<FeatureId> Vocabulary::find(const std::string &token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Vocabulary::set_doc_freq(std::vector<std::size_t> doc_freq) {
    if (doc_freq.empty()) doc_freq.assign(tokens_.size(), 0);
    if (doc_freq.size() != tokens_.size())
        throw InvalidArgument("doc_freq length does not match vocabulary size");
    doc_freq_ = std::move(doc_freq);
}

void Corpus::validate() const {
    const auto d = dim();
    for (const auto &doc : train) {
        if (!doc.label) throw InvalidArgument("train split contains an unlabeled doc");
        check_doc(doc, d);
    }
    for (const auto &doc : test) {
        if (!doc.label) throw InvalidArgument("test split contains an unlabeled doc");
        check_doc(doc, d);
    }
    for (const auto &doc : unlabeled) {
        if (doc.label) throw InvalidArgument("unlabeled split contains a labeled doc");
        check_doc(doc, d);
    }
}

// ---------------------------------------------------------------------------
// Sparse text format

namespace {

SparseDoc parse_line(std::string_view line, std::size_t lineno) {
    SparseDoc doc;
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        auto start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        return line.substr(start, pos - start);
    };

    auto label = next_token();
    if (label == "+1" || label == "1")
        doc.label = Label::positive;
    else if (label == "-1")
        doc.label = Label::negative;
    else if (label != "?")
        throw ParseError("bad label '" + std::string(label) + "' (expected +1, -1 or ?)", lineno);

    long long prev = 0;
    for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
        auto colon = tok.find(':');
        if (colon == std::string_view::npos)
            throw ParseError("expected idx:val, got '" + std::string(tok) + "'", lineno);
        long long idx;
        double val;
        if (!detail::parse_int(tok.substr(0, colon), idx) || idx < 1)
            throw ParseError("bad feature index in '" + std::string(tok) + "'", lineno);
        if (!detail::parse_double(tok.substr(colon + 1), val) || !std::isfinite(val))
            throw ParseError("bad value in '" + std::string(tok) + "'", lineno);
        if (val < 0.0) throw ParseError("negative value in '" + std::string(tok) + "'", lineno);
        if (idx == prev) throw ParseError("duplicate index " + std::to_string(idx), lineno);
        if (idx < prev)
            throw ParseError("indices not increasing at " + std::to_string(idx), lineno);
        if (idx > static_cast<long long>(UINT32_MAX))
            throw ParseError("index " + std::to_string(idx) + " too large", lineno);
        prev = idx;
        if (val != 0.0) doc.entries.push_back({static_cast<FeatureId>(idx - 1), val});
    }
    return doc;
}

}  // namespace

Docs parse_sparse(std::istream &in) {
    Docs docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        docs.push_back(parse_line(std::string_view(line).substr(first), lineno));
    }
    if (in.bad()) throw IoError("read error while parsing sparse data");
    return docs;
}

Docs parse_sparse(const std::filesystem::path &path) {
    auto in = detail::open_in(path);
    try {
        return parse_sparse(in);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

void write_sparse(std::ostream &out, const Docs &docs) {
    for (const auto &doc : docs) {
        if (!doc.label)
            out << '?';
        else
            out << (*doc.label == Label::positive ? "+1" : "-1");
        for (const auto &e : doc.entries)
            out << ' ' << (e.id + 1) << ':' << detail::format_double(e.value);
        out << '\n';
    }
}

void write_sparse(const std::filesystem::path &path, const Docs &docs) {
    auto out = detail::open_out(path);
    write_sparse(out, docs);
    detail::finish_write(out, path);
}

Vocabulary read_vocabulary(const std::filesystem::path &path) {
    auto in = detail::open_in(path);
    std::vector<std::string> tokens;
    std::vector<std::size_t> df;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        std::size_t id, freq;
        if (t2 == std::string::npos || !detail::parse_int(std::string_view(line).substr(0, t1), id) ||
            !detail::parse_int(std::string_view(line).substr(t2 + 1), freq))
            throw ParseError(path.string() + ": expected id<TAB>token<TAB>doc_freq", lineno);
        if (id != tokens.size())
            throw ParseError(path.string() + ": ids must be 0,1,2,... in order", lineno);
        tokens.push_back(line.substr(t1 + 1, t2 - t1 - 1));
        df.push_back(freq);
    }
    return Vocabulary(std::move(tokens), std::move(df));
}

void write_vocabulary(const std::filesystem::path &path, const Vocabulary &vocab) {
    auto out = detail::open_out(path);
    for (std::size_t i = 0; i < vocab.size(); ++i)
        out << i << '\t' << vocab.tokens()[i] << '\t' << vocab.doc_freq()[i] << '\n';
    detail::finish_write(out, path);
}

std::vector<std::string> read_token_list(const std::filesystem::path &path) {
    auto in = detail::open_in(path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        tokens.push_back(line);
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// Transforms

std::vector<std::size_t> document_frequency(const Docs &docs, std::size_t dim) {
    std::vector<std::size_t> df(dim, 0);
    for (const auto &doc : docs)
        for (const auto &e : doc.entries) {
            if (e.id >= dim) throw InvalidArgument("document_frequency: id outside dimension");
            ++df[e.id];
        }
    return df;
}

Corpus assemble_corpus(Docs train, Docs test, Docs unlabeled, std::vector<std::string> tokens) {
    std::size_t dim = tokens.size();
    for (const auto *split : {&train, &test, &unlabeled})
        for (const auto &doc : *split) dim = std::max(dim, doc.min_dim());

    Corpus c;
    if (tokens.empty()) {
        c.vocab = Vocabulary::anonymous(dim);
    } else {
        if (tokens.size() < dim)
            throw InvalidArgument("token list has " + std::to_string(tokens.size()) +
                                  " entries but data uses " + std::to_string(dim) + " features");
        c.vocab = Vocabulary(std::move(tokens));
    }
    c.train = std::move(train);
    c.test = std::move(test);
    c.unlabeled = std::move(unlabeled);
    c.vocab.set_doc_freq(document_frequency(c.train, c.dim()));
    c.validate();
    return c;
}

Corpus prune_features(const Corpus &corpus, std::size_t min_df) {
    if (min_df == 0) throw InvalidArgument("min_df must be positive");
    const auto df = document_frequency(corpus.train, corpus.dim());

    constexpr auto dropped = static_cast<FeatureId>(-1);
    std::vector<FeatureId> remap(corpus.dim(), dropped);
    std::vector<std::string> tokens;
    std::vector<std::size_t> kept_df;
    for (std::size_t j = 0; j < corpus.dim(); ++j) {
        if (df[j] < min_df) continue;
        remap[j] = static_cast<FeatureId>(tokens.size());
        tokens.push_back(corpus.vocab.tokens()[j]);
        kept_df.push_back(df[j]);
    }
    if (tokens.empty())
        throw InvalidArgument("min_df=" + std::to_string(min_df) + " removes every feature");

    auto reindex = [&](const Docs &docs) {
        Docs out;
        out.reserve(docs.size());
        for (const auto &doc : docs) {
            SparseDoc d{{}, doc.label};
            for (const auto &e : doc.entries)
                if (remap[e.id] != dropped) d.entries.push_back({remap[e.id], e.value});
            out.push_back(std::move(d));
        }
        return out;
    };

    Corpus out;
    out.vocab = Vocabulary(std::move(tokens), std::move(kept_df));
    out.train = reindex(corpus.train);
    out.test = reindex(corpus.test);
    out.unlabeled = reindex(corpus.unlabeled);
    return out;
}

SparseDoc normalize(const SparseDoc &doc) {
    double max_log = 0.0;
    for (const auto &e : doc.entries) max_log = std::max(max_log, std::log1p(e.value));
    if (doc.entries.empty() || !(max_log > 0.0))
        throw InvalidArgument("normalize: document has no nonzero entry");
    SparseDoc out{doc.entries, doc.label};
    for (auto &e : out.entries) {
        double l = std::log1p(e.value);
        // the maximal entries map to exactly 1
        e.value = l == max_log ? 1.0 : l / max_log;
    }
    return out;
}

Corpus normalize_corpus(const Corpus &corpus) {
    auto run = [](const Docs &docs, const char *split) {
        Docs out;
        out.reserve(docs.size());
        std::size_t empty = 0;
        for (const auto &doc : docs) {
            if (doc.empty()) {
                ++empty;
                continue;
            }
            out.push_back(normalize(doc));
        }
        if (empty)
            log::warn("dropped " + std::to_string(empty) + " empty document(s) from " + split +
                      " split");
        return out;
    };
    Corpus out;
    out.vocab = corpus.vocab;
    out.train = run(corpus.train, "train");
    out.test = run(corpus.test, "test");
    out.unlabeled = run(corpus.unlabeled, "unlabeled");
    return out;
}

Corpus prepare(const Corpus &corpus, std::size_t min_df) {
    return normalize_corpus(prune_features(corpus, min_df));
}

}  // namespace sbdae
