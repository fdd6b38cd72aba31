#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sbdae {

using FeatureId = std::uint32_t;

enum class Label : int { negative = -1, positive = 1 };

inline double sign_of(Label y) noexcept { return static_cast<double>(static_cast<int>(y)); }

struct Entry {
    FeatureId id;
    double value;

    friend bool operator==(const Entry &, const Entry &) = default;
};

/// One document as a sparse vector. Ids are strictly increasing and no stored
/// value is zero.
struct SparseDoc {
    std::vector<Entry> entries;
    std::optional<Label> label;

    bool empty() const noexcept { return entries.empty(); }
    /// One past the largest stored id (0 for an empty doc).
    std::size_t min_dim() const noexcept { return entries.empty() ? 0 : entries.back().id + 1; }

    friend bool operator==(const SparseDoc &, const SparseDoc &) = default;
};

using Docs = std::vector<SparseDoc>;

double dot(const SparseDoc &doc, std::span<const double> dense);
std::vector<double> to_dense(const SparseDoc &doc, std::size_t dim);
/// Throws InvalidArgument if any invariant of SparseDoc is broken or an id is >= dim.
void check_doc(const SparseDoc &doc, std::size_t dim);

class Vocabulary {
public:
    Vocabulary() = default;
    /// Builds a vocabulary; doc_freq may be empty (treated as all zero).
    Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> doc_freq = {});

    /// Placeholder tokens "w1".."wN" named after the 1-based file index.
    static Vocabulary anonymous(std::size_t size);

    std::size_t size() const noexcept { return tokens_.size(); }
    const std::string &token(FeatureId id) const { return tokens_.at(id); }
    std::optional<FeatureId> find(const std::string &token) const;
    const std::vector<std::string> &tokens() const noexcept { return tokens_; }
    const std::vector<std::size_t> &doc_freq() const noexcept { return doc_freq_; }

    void set_doc_freq(std::vector<std::size_t> doc_freq);

    friend bool operator==(const Vocabulary &a, const Vocabulary &b) {
        return a.tokens_ == b.tokens_ && a.doc_freq_ == b.doc_freq_;
    }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, FeatureId> index_;
    std::vector<std::size_t> doc_freq_;
};

struct Corpus {
    Vocabulary vocab;
    Docs train;
    Docs test;
    Docs unlabeled;

    std::size_t dim() const noexcept { return vocab.size(); }
    /// Checks the split/label invariants and every doc against the vocabulary.
    void validate() const;
};

// --- sparse text format -----------------------------------------------------
// One document per line: `label idx:val idx:val ...`, label in {+1, 1, -1, ?},
// indices 1-based and strictly increasing. Blank lines and lines starting
// with '#' are skipped.

Docs parse_sparse(std::istream &in);
Docs parse_sparse(const std::filesystem::path &path);
void write_sparse(std::ostream &out, const Docs &docs);
void write_sparse(const std::filesystem::path &path, const Docs &docs);

// --- vocabulary file: `id<TAB>token<TAB>doc_freq` with 0-based ids ---------------

Vocabulary read_vocabulary(const std::filesystem::path &path);
void write_vocabulary(const std::filesystem::path &path, const Vocabulary &vocab);

/// Plain token list (one token per line, line n is file index n).
std::vector<std::string> read_token_list(const std::filesystem::path &path);

// --- transforms ---------------------------------------------------------------

std::vector<std::size_t> document_frequency(const Docs &docs, std::size_t dim);

/// Assembles a corpus from parsed splits. The vocabulary is sized to cover
/// every split (tokens may be empty, giving anonymous names) and its doc_freq
/// is recomputed from train.
Corpus assemble_corpus(Docs train, Docs test, Docs unlabeled,
                       std::vector<std::string> tokens = {});

/// Drops features whose train document frequency is below min_df, from every
/// split, and reindexes the survivors densely in their original order.
Corpus prune_features(const Corpus &corpus, std::size_t min_df);

/// x = log(1 + c) / max log(1 + c) over the doc's entries.
SparseDoc normalize(const SparseDoc &doc);

/// Drops empty docs (with a warning) and normalizes every split.
Corpus normalize_corpus(const Corpus &corpus);

/// prune_features followed by normalize_corpus.
Corpus prepare(const Corpus &corpus, std::size_t min_df);

}  // namespace sbdae
