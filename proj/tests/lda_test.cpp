#include <gtest/gtest.h>

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "streamqe/lda.hpp"
#include "streamqe/rng.hpp"
#include "support/fixtures.hpp"

using streamqe::Document;
using streamqe::Error;
using streamqe::ErrorKind;
using streamqe::fit_lda;
using streamqe::GibbsLda;
using streamqe::LdaConfig;
using streamqe::Topic;
using streamqe::TopicSet;

namespace {

std::vector<Document> tiny_corpus() {
    std::vector<Document> docs;
    streamqe::Rng rng(11);
    const std::vector<std::string> vocab = fixtures::pseudo_vocab(10, rng);
    for (int i = 0; i < 30; ++i) {
        std::vector<std::string> tokens;
        for (int t = 0; t < 6; ++t) tokens.push_back(vocab[rng.next_index(vocab.size())]);
        docs.push_back(fixtures::make_doc("d" + std::to_string(i), i, std::move(tokens)));
    }
    return docs;
}

TEST(Lda, AssignmentCountsConservedAcrossSweeps) {
    const auto docs = tiny_corpus();
    LdaConfig cfg;
    cfg.topic_count = 3;
    cfg.seed = 5;
    GibbsLda lda(std::span<const Document>(docs), cfg);
    EXPECT_EQ(lda.assigned_total(), static_cast<std::int64_t>(lda.token_count()));
    for (int s = 0; s < 5; ++s) {
        lda.sweep();
        EXPECT_EQ(lda.assigned_total(), static_cast<std::int64_t>(lda.token_count()));
    }
}

TEST(Lda, EstimatesAreDistributionsOverFullVocabulary) {
    const auto docs = tiny_corpus();
    LdaConfig cfg;
    cfg.topic_count = 3;
    cfg.iterations = 50;
    cfg.seed = 5;
    const TopicSet ts = fit_lda(std::span<const Document>(docs), cfg);
    ASSERT_EQ(ts.topics.size(), 3u);

    std::set<std::string> vocab;
    for (const Document& d : docs) vocab.insert(d.tokens.begin(), d.tokens.end());
    EXPECT_EQ(ts.vocabulary, vocab);

    for (const Topic& t : ts.topics) {
        EXPECT_EQ(t.word_probs.size(), vocab.size());
        double sum = 0.0;
        for (const auto& [w, p] : t.word_probs) {
            EXPECT_GT(p, 0.0);  // smoothing keeps every entry positive
            sum += p;
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(Lda, DeterministicForFixedSeed) {
    const auto docs = tiny_corpus();
    LdaConfig cfg;
    cfg.topic_count = 3;
    cfg.iterations = 40;
    cfg.seed = 99;
    const TopicSet a = fit_lda(std::span<const Document>(docs), cfg);
    const TopicSet b = fit_lda(std::span<const Document>(docs), cfg);
    ASSERT_EQ(a.topics.size(), b.topics.size());
    for (std::size_t k = 0; k < a.topics.size(); ++k)
        EXPECT_EQ(a.topics[k].word_probs, b.topics[k].word_probs);

    cfg.seed = 100;
    const TopicSet c = fit_lda(std::span<const Document>(docs), cfg);
    bool any_different = false;
    for (std::size_t k = 0; k < a.topics.size() && !any_different; ++k)
        any_different = a.topics[k].word_probs != c.topics[k].word_probs;
    EXPECT_TRUE(any_different);
}

TEST(Lda, SingleTopicMatchesUnigramClosedForm) {
    const auto docs = tiny_corpus();
    LdaConfig cfg;
    cfg.topic_count = 1;
    cfg.iterations = 3;
    cfg.seed = 1;
    const TopicSet ts = fit_lda(std::span<const Document>(docs), cfg);
    ASSERT_EQ(ts.topics.size(), 1u);

    std::map<std::string, double> counts;
    double total = 0.0;
    for (const Document& d : docs)
        for (const std::string& t : d.tokens) {
            counts[t] += 1.0;
            total += 1.0;
        }
    const double v = static_cast<double>(counts.size());
    for (const auto& [w, p] : ts.topics[0].word_probs)
        EXPECT_NEAR(p, (counts[w] + cfg.beta) / (total + v * cfg.beta), 1e-12) << w;
}

TEST(Lda, SeparatesDisjointVocabularies) {
    streamqe::Rng rng(21);
    const auto words = fixtures::pseudo_vocab(16, rng);
    const std::vector<std::string> pool_a(words.begin(), words.begin() + 8);
    const std::vector<std::string> pool_b(words.begin() + 8, words.end());
    const auto docs = fixtures::two_topic_docs(120, pool_a, pool_b, 31);

    LdaConfig cfg;
    cfg.topic_count = 2;
    cfg.iterations = 200;
    cfg.seed = 7;
    const TopicSet ts = fit_lda(std::span<const Document>(docs), cfg);

    const std::set<std::string> set_a(pool_a.begin(), pool_a.end());
    const std::set<std::string> set_b(pool_b.begin(), pool_b.end());
    std::set<int> kinds;
    for (const Topic& t : ts.topics) {
        const auto top = t.top_words(4);
        const bool all_a = std::all_of(top.begin(), top.end(),
                                       [&](const std::string& w) { return set_a.count(w); });
        const bool all_b = std::all_of(top.begin(), top.end(),
                                       [&](const std::string& w) { return set_b.count(w); });
        EXPECT_TRUE(all_a || all_b);
        kinds.insert(all_a ? 0 : 1);
    }
    EXPECT_EQ(kinds.size(), 2u);  // one topic per pool
}

TEST(Lda, ZeroTokenDocumentsExcluded) {
    auto docs = tiny_corpus();
    docs.push_back(fixtures::make_doc("empty", 0, {}));
    LdaConfig cfg;
    cfg.topic_count = 2;
    cfg.seed = 3;
    GibbsLda lda(std::span<const Document>(docs), cfg);
    std::size_t tokens = 0;
    for (const Document& d : docs) tokens += d.tokens.size();
    EXPECT_EQ(lda.token_count(), tokens);
}

TEST(Lda, EmptyWindowRejected) {
    const std::vector<Document> none;
    LdaConfig cfg;
    try {
        fit_lda(std::span<const Document>(none), cfg);
        FAIL() << "expected an input error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Input);
    }
}

TEST(Lda, VocabularySmallerThanTopicsRejected) {
    std::vector<Document> docs = {fixtures::make_doc("a", 0, {"only", "two"})};
    LdaConfig cfg;
    cfg.topic_count = 3;
    EXPECT_THROW(fit_lda(std::span<const Document>(docs), cfg), Error);
}

TEST(Lda, AlphaDefaultsToFiftyOverTopics) {
    LdaConfig cfg;
    cfg.topic_count = 5;
    EXPECT_DOUBLE_EQ(cfg.resolved_alpha(), 10.0);
    cfg.alpha = 0.7;
    EXPECT_DOUBLE_EQ(cfg.resolved_alpha(), 0.7);
}

TEST(Lda, TopWordsTieBreaksLexicographically) {
    Topic t;
    t.word_probs = {{"b", 0.25}, {"a", 0.25}, {"z", 0.5}};
    const std::vector<std::string> want2 = {"z", "a"};
    EXPECT_EQ(t.top_words(2), want2);
    EXPECT_EQ(t.top_words(10).size(), 3u);
    EXPECT_TRUE(t.top_words(0).empty());
}

}  // namespace
