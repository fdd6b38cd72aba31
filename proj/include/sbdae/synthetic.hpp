#pragma once

// Planted-polarity corpus: Zipfian background vocabulary plus a handful of
// polarity words whose counts decide the label.

#include <cstdint>
#include <vector>

#include "sbdae/corpus.hpp"

namespace sbdae {

struct PlantedCorpusSpec {
    std::size_t vocab_size = 1000;
    std::size_t n_train = 2000;
    std::size_t n_test = 1000;
    std::size_t n_unlabeled = 0;
    std::size_t n_polar_per_class = 10;
    double label_noise = 0.05;
    double zipf_exponent = 1.0;
    std::size_t min_background_tokens = 30;
    std::size_t max_background_tokens = 90;
    std::uint64_t seed = 0;
};

struct PlantedCorpus {
    Corpus corpus;                     // raw counts, not normalized
    std::vector<FeatureId> positive;   // planted positive words
    std::vector<FeatureId> negative;   // planted negative words
};

PlantedCorpus make_planted_corpus(const PlantedCorpusSpec &spec);

}  // namespace sbdae
