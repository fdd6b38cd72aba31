#include "sbdae/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sbdae/error.hpp"
#include "sbdae/rng.hpp"

namespace sbdae {

namespace {

std::size_t binomial(Rng &rng, std::size_t n, double p) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) k += uniform01(rng) < p;
    return k;
}

}  // namespace

PlantedCorpus make_planted_corpus(const PlantedCorpusSpec &spec) {
    const std::size_t n_polar = 2 * spec.n_polar_per_class;
    if (spec.vocab_size <= n_polar) throw InvalidArgument("vocabulary too small for planted words");
    if (spec.n_polar_per_class == 0) throw InvalidArgument("need at least one polarity word per class");
    if (spec.min_background_tokens > spec.max_background_tokens)
        throw InvalidArgument("min_background_tokens > max_background_tokens");
    if (!(spec.label_noise >= 0.0 && spec.label_noise < 0.5)) throw InvalidArgument("label_noise must be in [0, 0.5)");

    const std::size_t n_background = spec.vocab_size - n_polar;
    Rng rng(spec.seed);

    // background word at rank r (0-based) has probability ~ 1/(r+1)^s
    std::vector<double> cdf(n_background);
    double total = 0.0;
    for (std::size_t r = 0; r < n_background; ++r) {
        total += 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
        cdf[r] = total;
    }
    for (auto &c : cdf) c /= total;

    // planted words take scattered ids in the back half of the vocabulary
    std::vector<FeatureId> ids(spec.vocab_size);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<FeatureId>(i);
    std::vector<FeatureId> tail(ids.begin() + static_cast<std::ptrdiff_t>(spec.vocab_size / 2), ids.end());
    shuffle(tail.begin(), tail.end(), rng);
    std::vector<FeatureId> polar(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(n_polar));
    std::sort(polar.begin(), polar.end());
    shuffle(polar.begin(), polar.end(), rng);

    PlantedCorpus out;
    out.positive.assign(polar.begin(), polar.begin() + static_cast<std::ptrdiff_t>(spec.n_polar_per_class));
    out.negative.assign(polar.begin() + static_cast<std::ptrdiff_t>(spec.n_polar_per_class), polar.end());

    std::vector<std::string> tokens(spec.vocab_size);
    std::vector<bool> is_polar(spec.vocab_size, false);
    for (std::size_t i = 0; i < spec.n_polar_per_class; ++i) {
        tokens[out.positive[i]] = "pos" + std::to_string(i + 1);
        tokens[out.negative[i]] = "neg" + std::to_string(i + 1);
        is_polar[out.positive[i]] = is_polar[out.negative[i]] = true;
    }
    std::vector<FeatureId> background;
    for (std::size_t i = 0; i < spec.vocab_size; ++i)
        if (!is_polar[i]) background.push_back(static_cast<FeatureId>(i));
    for (std::size_t r = 0; r < background.size(); ++r) tokens[background[r]] = "w" + std::to_string(r + 1);

    auto make_doc = [&](bool keep_label) {
        std::map<FeatureId, double> counts;
        const std::size_t span = spec.max_background_tokens - spec.min_background_tokens + 1;
        const std::size_t length = spec.min_background_tokens + uniform_index(rng, span);
        for (std::size_t t = 0; t < length; ++t) {
            auto r = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), uniform01(rng)) - cdf.begin());
            counts[background[std::min(r, n_background - 1)]] += 1.0;
        }
        const bool latent_pos = uniform01(rng) < 0.5;
        const auto &own = latent_pos ? out.positive : out.negative;
        const auto &other = latent_pos ? out.negative : out.positive;
        const std::size_t n_own = 1 + binomial(rng, 2, 0.3);
        const std::size_t n_other = binomial(rng, 2, 0.2);
        for (std::size_t t = 0; t < n_own; ++t) counts[own[uniform_index(rng, own.size())]] += 1.0;
        for (std::size_t t = 0; t < n_other; ++t) counts[other[uniform_index(rng, other.size())]] += 1.0;

        bool positive = n_own == n_other ? latent_pos : (n_own > n_other) == latent_pos;
        if (uniform01(rng) < spec.label_noise) positive = !positive;

        SparseDoc doc;
        for (const auto &[id, c] : counts) doc.entries.push_back({id, c});
        if (keep_label) doc.label = positive ? Label::positive : Label::negative;
        return doc;
    };

    Docs train, test, unlabeled;
    for (std::size_t i = 0; i < spec.n_train; ++i) train.push_back(make_doc(true));
    for (std::size_t i = 0; i < spec.n_test; ++i) test.push_back(make_doc(true));
    for (std::size_t i = 0; i < spec.n_unlabeled; ++i) unlabeled.push_back(make_doc(false));
    out.corpus = assemble_corpus(std::move(train), std::move(test), std::move(unlabeled), std::move(tokens));
    return out;
}

}  // namespace sbdae
