#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sbdae/error.hpp"
#include "sbdae/posterior.hpp"

using namespace sbdae;

TEST_CASE("difficult_mask uses a strict margin test") {
    LinearModel zero(2, 0.0);
    Docs docs{{{{0, 1.0}}, Label::positive}, {{{1, 1.0}}, Label::negative}};
    CHECK(difficult_mask(zero, docs) == std::vector<bool>{true, true});

    LinearModel m(2, 0.0);
    m.theta = {2.0, 1.0};
    // y*margin = 2 -> easy; y*margin = -1 for the negative doc -> difficult
    CHECK(difficult_mask(m, docs) == std::vector<bool>{false, true});

    m.theta = {1.0, -1.0};  // both margins exactly 1
    CHECK(difficult_mask(m, docs) == std::vector<bool>{false, false});
}

TEST_CASE("sigma_diag examples") {
    LinearModel zero(3, 0.0);
    Docs one{{{{0, 2.0}, {1, 1.0}}, Label::positive}};
    auto s = sigma_diag(zero, one, 1.0);
    CHECK(s[0] == 0.25);
    CHECK(s[1] == 1.0);
    CHECK(s[2] == doctest::Approx(1e8).epsilon(1e-15));  // feature absent from difficult docs

    auto doubled = sigma_diag(zero, one, 2.0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(doubled[j] == s[j] / 2.0);
}

TEST_CASE("sigma_diag with no difficult docs sits at the floor") {
    LinearModel m(2, 0.0);
    m.theta = {5.0, -5.0};
    Docs docs{{{{0, 1.0}}, Label::positive}, {{{1, 1.0}}, Label::negative}};
    auto s = sigma_diag(m, docs, 10.0, {1e-6, false});
    for (double v : s) CHECK(v == doctest::Approx(1.0 / (10.0 * 1e-6)));
    CHECK_THROWS_AS(sigma_diag(m, docs, 0.0), InvalidArgument);
    CHECK_THROWS_AS(sigma_diag(m, docs, -1.0), InvalidArgument);
}

TEST_CASE("sigma_diag equals the dense double loop") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 1 + uniform_index(rng, 20), n = 1 + uniform_index(rng, 40);
        LinearModel m(d, 0.01);
        m.theta = oracle::random_vec(rng, d, -2, 2);
        m.bias = uniform01(rng) - 0.5;
        Docs docs;
        std::vector<oracle::Vec> dense;
        std::vector<double> ys;
        for (std::size_t i = 0; i < n; ++i) {
            docs.push_back(oracle::random_doc(rng, d, 0.3, oracle::random_label(rng)));
            dense.push_back(to_dense(docs.back(), d));
            ys.push_back(sign_of(*docs.back().label));
        }
        const double beta = std::pow(10.0, 4.0 * uniform01(rng));
        auto fast = sigma_diag(m, docs, beta);
        auto slow = oracle::sigma_brute_force(m.theta, m.bias, dense, ys, beta, default_epsilon_floor);
        for (std::size_t j = 0; j < d; ++j) CHECK(oracle::rel_error(fast[j], slow[j], 0.0) <= 1e-12);
    }
}

TEST_CASE("removing an easy document leaves sigma_diag unchanged") {
    Rng rng(22);
    const std::size_t d = 12;
    LinearModel m(d, 0.0);
    m.theta = oracle::random_vec(rng, d, -2, 2);
    Docs docs;
    for (int i = 0; i < 60; ++i) docs.push_back(oracle::random_doc(rng, d, 0.3, oracle::random_label(rng)));
    const auto mask = difficult_mask(m, docs);
    const auto base = sigma_diag(m, docs, 1e3);
    int removed = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (mask[i]) continue;
        Docs fewer = docs;
        fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
        CHECK(sigma_diag(m, fewer, 1e3) == base);
        ++removed;
    }
    CHECK(removed > 0);
}

TEST_CASE("beta scale law") {
    Rng rng(23);
    LinearModel m(15, 0.0);
    m.theta = oracle::random_vec(rng, 15, -1, 1);
    Docs docs;
    for (int i = 0; i < 40; ++i) docs.push_back(oracle::random_doc(rng, 15, 0.3, oracle::random_label(rng)));
    // powers of two keep the products exact
    for (double c : {2.0, 4.0, 0.5, 1024.0}) {
        auto a = sigma_diag(m, docs, 8.0 * c);
        auto b = sigma_diag(m, docs, 8.0);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == b[j] / c);
    }
    for (double c : {3.0, 10.0, 1e4}) {
        auto a = sigma_diag(m, docs, 7.0 * c);
        auto b = sigma_diag(m, docs, 7.0);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(oracle::rel_error(a[j], b[j] / c, 0.0) <= 1e-15);
    }
}

TEST_CASE("exact_hessian adds the factor 2 and the 2 lambda term") {
    LinearModel zero(2, 0.5);
    Docs one{{{{0, 2.0}}, Label::positive}};
    auto s = sigma_diag(zero, one, 1.0, {1e-8, true});
    CHECK(s[0] == doctest::Approx(1.0 / (2.0 * 4.0 + 1.0)));
    CHECK(s[1] == doctest::Approx(1.0));
}

TEST_CASE("build_posterior copies theta and drops the bias") {
    Rng rng(24);
    LinearModel m(6, 0.1);
    m.theta = oracle::random_vec(rng, 6, -1, 1);
    m.bias = 3.0;
    Docs docs;
    for (int i = 0; i < 20; ++i) docs.push_back(oracle::random_doc(rng, 6, 0.4, oracle::random_label(rng)));
    auto p = build_posterior(m, docs, 1e5);
    CHECK(p.theta_hat == m.theta);
    CHECK(p.beta == 1e5);
    CHECK(p.sigma_diag == sigma_diag(m, docs, 1e5));

    auto sharp = build_posterior(m, docs, 1e16);
    for (double v : sharp.sigma_diag) CHECK(v < 1e-7);
}

TEST_CASE("Posterior file round trip is byte exact") {
    Rng rng(25);
    Posterior p{oracle::random_vec(rng, 9, -1, 1), oracle::random_vec(rng, 9, 1e-9, 1e3), 1e6, 1e-8};
    std::stringstream a;
    save(a, p);
    auto back = load_posterior(a);
    CHECK(back == p);
    std::stringstream b;
    save(b, back);
    CHECK(a.str() == b.str());
}
