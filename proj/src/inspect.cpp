#include "sbdae/inspect.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "sbdae/error.hpp"

namespace sbdae {

std::vector<FilterReport> top_words(const Matrix &W, const Vocabulary &vocab, std::size_t k_top,
                                    std::size_t n_filters) {
    if (vocab.size() != W.cols) throw InvalidArgument("top_words: vocabulary size != input dimension");
    if (k_top == 0 || k_top > W.cols)
        throw InvalidArgument("top_words: k_top must be in [1, " + std::to_string(W.cols) + "]");
    if (n_filters == 0 || n_filters > W.rows)
        throw InvalidArgument("top_words: n_filters must be in [1, " + std::to_string(W.rows) + "]");

    std::vector<FilterReport> reports;
    std::vector<FeatureId> idx(W.cols);
    for (std::size_t f = 0; f < n_filters; ++f) {
        const auto row = W.row(f);
        FilterReport rep{f, {}, {}};
        auto pick = [&](auto before, std::vector<WeightedToken> &dst) {
            std::iota(idx.begin(), idx.end(), FeatureId{0});
            std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k_top), idx.end(),
                              [&](FeatureId a, FeatureId b) {
                                  if (row[a] != row[b]) return before(row[a], row[b]);
                                  return a < b;
                              });
            for (std::size_t i = 0; i < k_top; ++i) dst.push_back({idx[i], vocab.token(idx[i]), row[idx[i]]});
        };
        pick(std::greater<double>{}, rep.top_activated);
        pick(std::less<double>{}, rep.top_deactivated);
        reports.push_back(std::move(rep));
    }
    return reports;
}

void render_filters(std::ostream &out, const std::vector<FilterReport> &reports) {
    if (reports.empty()) return;
    std::size_t width = 8;
    for (const auto &r : reports)
        for (const auto *list : {&r.top_activated, &r.top_deactivated})
            for (const auto &t : *list) width = std::max(width, t.token.size() + 2);
    const std::size_t k_top = reports.front().top_activated.size();

    auto header = [&](const char *title) {
        out << title << '\n';
        for (const auto &r : reports) out << std::left << std::setw(static_cast<int>(width)) << ("#" + std::to_string(r.filter_index));
        out << '\n';
    };
    auto body = [&](auto member) {
        for (std::size_t i = 0; i < k_top; ++i) {
            for (const auto &r : reports) out << std::left << std::setw(static_cast<int>(width)) << (r.*member)[i].token;
            out << '\n';
        }
    };
    header("most activated");
    body(&FilterReport::top_activated);
    out << '\n';
    header("most deactivated");
    body(&FilterReport::top_deactivated);
}

void write_filter_records(std::ostream &out, const std::vector<FilterReport> &reports) {
    auto list = [](const std::vector<WeightedToken> &v) {
        auto arr = nlohmann::json::array();
        for (const auto &t : v) arr.push_back({{"id", t.id}, {"token", t.token}, {"weight", t.weight}});
        return arr;
    };
    for (const auto &r : reports) {
        nlohmann::json j{{"filter", r.filter_index},
                         {"activated", list(r.top_activated)},
                         {"deactivated", list(r.top_deactivated)}};
        out << j.dump() << '\n';
    }
}

}  // namespace sbdae
