#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sbdae/autoencoder.hpp"
#include "sbdae/corpus.hpp"

namespace sbdae {

struct WeightedToken {
    FeatureId id;
    std::string token;
    double weight;
};

/// Most activated / deactivated vocabulary words of one hidden unit (a row of W).
struct FilterReport {
    std::size_t filter_index;
    std::vector<WeightedToken> top_activated;    // weight descending
    std::vector<WeightedToken> top_deactivated;  // weight ascending
};

/// Reports for the first n_filters rows of W. Ties go to the lower feature id.
std::vector<FilterReport> top_words(const Matrix &W, const Vocabulary &vocab, std::size_t k_top,
                                    std::size_t n_filters);

inline std::vector<FilterReport> top_words(const AeModel &model, const Vocabulary &vocab,
                                           std::size_t k_top, std::size_t n_filters) {
    return top_words(model.W, vocab, k_top, n_filters);
}

/// Aligned table: one column per filter, activated words on top, deactivated below.
void render_filters(std::ostream &out, const std::vector<FilterReport> &reports);

/// One JSON object per filter per line.
void write_filter_records(std::ostream &out, const std::vector<FilterReport> &reports);

}  // namespace sbdae
