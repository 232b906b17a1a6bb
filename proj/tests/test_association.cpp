#include <gtest/gtest.h>

#include <numeric>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "support.hpp"
#include "sweat/association.hpp"
#include "sweat/error.hpp"

using namespace sweat;
using namespace sweat::testing;

namespace {

// w=(1,0) in space 1, (0,1) in space 2; poles a=(1,0), b=(0,1) in both.
struct Toy {
    EmbeddingSpace s1 = make_space("E1", {{"w", {1.0, 0.0}}, {"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
    EmbeddingSpace s2 = make_space("E2", {{"w", {0.0, 1.0}}, {"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
    PoleWordsets poles{"A", "B", {"a"}, {"b"}};
    TopicWordset topic{"T", {"w"}};
};

PermutationConfig exact_cfg() {
    PermutationConfig c;
    c.mode = PermutationMode::exact;
    return c;
}

} // namespace

TEST(Validation, PolesAndTopics) {
    EXPECT_THROW(validate(PoleWordsets{"A", "B", {}, {"b"}}), ValidationError);
    EXPECT_THROW(validate(PoleWordsets{"A", "B", {"a", "a"}, {"b"}}), ValidationError);
    EXPECT_THROW(validate(PoleWordsets{"A", "B", {"a", "x"}, {"b", "x"}}), ValidationError);
    EXPECT_NO_THROW(validate(PoleWordsets{"A", "B", {"a"}, {"b"}}));
    EXPECT_THROW(validate(TopicWordset{"T", {}}), ValidationError);
    EXPECT_THROW(validate(TopicWordset{"T", {"w", "w"}}), ValidationError);
}

TEST(SingleWordAssociation, WorkedExample) {
    Toy t;
    EXPECT_EQ(single_word_association("w", t.s1, t.poles), 1.0); // cos 1 minus cos 0
    EXPECT_EQ(single_word_association("w", t.s2, t.poles), -1.0);
}

TEST(SingleWordAssociation, IdenticalPolesCancelExactly) {
    std::mt19937_64 rng(1);
    std::vector<Row> rows;
    auto av = gaussian_vector(rng, 6), bv = gaussian_vector(rng, 6);
    rows.push_back({"a1", av});
    rows.push_back({"a2", bv});
    rows.push_back({"b1", av});
    rows.push_back({"b2", bv});
    for (int i = 0; i < 20; ++i) rows.push_back({"w" + std::to_string(i), gaussian_vector(rng, 6)});
    auto s = make_space("s", rows);
    PoleWordsets poles{"A", "B", {"a1", "a2"}, {"b1", "b2"}};
    for (int i = 0; i < 20; ++i) EXPECT_EQ(single_word_association("w" + std::to_string(i), s, poles), 0.0);
}

TEST(SingleWordAssociation, PoleSwapNegatesExactlyAndMatchesOracle) {
    auto s = random_space("r", 40, 8, 2);
    PoleWordsets poles{"A", "B", {"w0", "w1", "w2"}, {"w3", "w4"}};
    for (int i = 5; i < 40; ++i) {
        const std::string w = "w" + std::to_string(i);
        const double v = single_word_association(w, s, poles);
        EXPECT_EQ(single_word_association(w, s, poles.swapped()), -v);
        EXPECT_NEAR(v, static_cast<double>(oracle_association(s, w, poles.words_a, poles.words_b)), 1e-13);
        EXPECT_LE(std::abs(v), 2.0);
    }
}

TEST(SingleWordAssociation, MissingWordsAreNamed) {
    Toy t;
    PoleWordsets poles{"A", "B", {"a", "ghost"}, {"b"}};
    try {
        single_word_association("nothere", t.s1, poles);
        FAIL() << "expected MissingWordsError";
    } catch (const MissingWordsError& e) {
        ASSERT_EQ(e.missing().size(), 1u);
        EXPECT_EQ(e.missing()[0].space, "E1");
        EXPECT_EQ(e.missing()[0].words, (std::vector<std::string>{"nothere", "ghost"}));
    }
}

TEST(WeatScore, WorkedExampleAndAntisymmetry) {
    auto s = make_space("E", {{"x", {1.0, 0.0}}, {"y", {0.0, 1.0}}, {"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
    PoleWordsets poles{"A", "B", {"a"}, {"b"}};
    TopicWordset x{"X", {"x"}}, y{"Y", {"y"}};
    EXPECT_EQ(weat_score(x, y, s, poles), 2.0);
    EXPECT_EQ(weat_score(y, x, s, poles), -2.0);
    EXPECT_THROW(weat_score(x, x, s, poles), ValidationError);
}

TEST(SweatScore, WorkedExampleAndIdentities) {
    Toy t;
    EXPECT_EQ(sweat_score(t.topic, t.s1, t.s2, t.poles), 2.0);
    EXPECT_EQ(sweat_score(t.topic, t.s2, t.s1, t.poles), -2.0);
    EXPECT_EQ(sweat_score(t.topic, t.s1, t.s2, t.poles.swapped()), -2.0);
    EXPECT_EQ(sweat_score(t.topic, t.s1, t.s1, t.poles), 0.0);
}

TEST(SweatScore, MissingWordsReportedPerSpace) {
    auto s1 = make_space("E1", {{"w", {1.0, 0.0}}, {"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}, {"v", {1.0, 1.0}}});
    auto s2 = make_space("E2", {{"w", {0.0, 1.0}}, {"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
    try {
        sweat_score({"T", {"w", "v"}}, s1, s2, {"A", "B", {"a"}, {"b"}});
        FAIL();
    } catch (const MissingWordsError& e) {
        ASSERT_EQ(e.missing().size(), 1u);
        EXPECT_EQ(e.missing()[0].space, "E2");
        EXPECT_EQ(e.missing()[0].words, std::vector<std::string>{"v"});
    }
}

TEST(EffectSize, WorkedExamples) {
    const std::vector<double> one{1.0}, minus{-1.0};
    EXPECT_EQ(effect_size(one, minus), 2.0);
    const double c = 0.37;
    const std::vector<double> x{c, -c}, y{-c, c};
    EXPECT_EQ(effect_size(x, y), 0.0);
    const std::vector<double> flat{0.5, 0.5};
    EXPECT_THROW(effect_size(flat, flat), DataError);
}

TEST(EffectSize, MatchesNaiveOracle) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(1 + trial % 13), y(1 + trial % 7);
        for (auto& v : x) v = u(rng);
        for (auto& v : y) v = u(rng);
        EXPECT_NEAR(effect_size(x, y), static_cast<double>(oracle_effect_size(x, y)), 1e-12);
    }
}

TEST(PermutationTest, SingletonEnumeration) {
    const std::vector<double> x{1.0}, y{-1.0};
    auto out = permutation_test(x, y, exact_cfg());
    EXPECT_EQ(out.n_permutations, 2u);
    EXPECT_EQ(out.method, PermutationMode::exact);
    EXPECT_EQ(out.tail, Tail::greater);
    EXPECT_EQ(out.p_value, 0.5);
    auto rev = permutation_test(y, x, exact_cfg());
    EXPECT_EQ(rev.tail, Tail::less);
    EXPECT_EQ(rev.p_value, 0.5);
}

TEST(PermutationTest, ConstantValuesGivePOne) {
    const std::vector<double> x(5, 0.3), y(5, 0.3);
    EXPECT_EQ(permutation_test(x, y, exact_cfg()).p_value, 1.0);
    PermutationConfig mc;
    mc.mode = PermutationMode::montecarlo;
    mc.samples = 500;
    EXPECT_EQ(permutation_test(x, y, mc).p_value, 1.0);
}

TEST(PermutationTest, ExactMatchesBitmaskOracleAllTails) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd(0.0, 0.4);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 7;
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = nd(rng) + 0.2;
        for (auto& v : y) v = nd(rng);
        const auto oracle = oracle_exact_p(x, y);
        auto cfg = exact_cfg();
        const auto directional = permutation_test(x, y, cfg);
        double obs = 0;
        for (std::size_t i = 0; i < n; ++i) obs += x[i] - y[i];
        EXPECT_DOUBLE_EQ(directional.p_value, static_cast<double>(obs >= 0 ? oracle.greater : oracle.less));
        EXPECT_GE(directional.p_value, 1.0 / directional.n_permutations);
        cfg.tail = TailMode::two_sided;
        const auto two = permutation_test(x, y, cfg);
        EXPECT_EQ(two.tail, Tail::two_sided);
        EXPECT_DOUBLE_EQ(two.p_value, static_cast<double>(oracle.two_sided));
    }
}

TEST(PermutationTest, MonteCarloNearExactForSixWords) {
    // C(12, 6) = 924 partitions; the exact p is the oracle.
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd(0.0, 0.5);
    std::vector<double> x(6), y(6);
    for (auto& v : x) v = nd(rng) + 0.3;
    for (auto& v : y) v = nd(rng);
    const double observed = std::accumulate(x.begin(), x.end(), 0.0) - std::accumulate(y.begin(), y.end(), 0.0);
    const auto oracle = oracle_exact_p(x, y);
    const double exact = static_cast<double>(observed >= 0.0 ? oracle.greater : oracle.less);
    PermutationConfig mc;
    mc.mode = PermutationMode::montecarlo;
    mc.samples = 10'000;
    mc.seed = 1234;
    const auto out = permutation_test(x, y, mc);
    EXPECT_EQ(out.method, PermutationMode::montecarlo);
    EXPECT_EQ(out.n_permutations, 10'000u);
    EXPECT_NEAR(out.p_value, exact, 3.0 * std::sqrt(exact * (1 - exact) / 10'000));
}

TEST(PermutationTest, AutoModeThreshold) {
    const std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, y{0.0, -0.1, 0.2, 0.1, 0.05, 0.3};
    PermutationConfig cfg;
    cfg.exact_limit = 924;
    EXPECT_EQ(permutation_test(x, y, cfg).method, PermutationMode::exact);
    cfg.exact_limit = 923;
    EXPECT_EQ(permutation_test(x, y, cfg).method, PermutationMode::montecarlo);
}

TEST(PermutationTest, MonteCarloDeterministicAcrossThreads) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    std::vector<double> x(12), y(12);
    for (auto& v : x) v = nd(rng);
    for (auto& v : y) v = nd(rng);
    PermutationConfig cfg;
    cfg.mode = PermutationMode::montecarlo;
    cfg.samples = 20'000;
    cfg.seed = 99;
    cfg.threads = 1;
    const double ref = permutation_test(x, y, cfg).p_value;
    for (int threads : {2, 3, 8}) {
        cfg.threads = threads;
        EXPECT_EQ(permutation_test(x, y, cfg).p_value, ref);
    }
    cfg.seed = 100;
    cfg.threads = 0;
    EXPECT_NE(draw_partitions(24, 12, 10, 99), draw_partitions(24, 12, 10, 100));
}

TEST(PermutationTest, InputErrors) {
    const std::vector<double> empty, one{1.0}, two{1.0, 2.0};
    EXPECT_THROW(permutation_test(empty, empty, {}), ValidationError);
    EXPECT_THROW(permutation_test(one, two, {}), ValidationError);
    PermutationConfig cfg;
    cfg.mode = PermutationMode::montecarlo;
    cfg.samples = 99;
    EXPECT_THROW(permutation_test(one, one, cfg), ValidationError);
}

TEST(PermutationTest, ExactInvariantUnderWordOrder) {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> nd(0.0, 0.3);
    std::vector<double> x(7), y(7);
    for (auto& v : x) v = nd(rng) + 0.1;
    for (auto& v : y) v = nd(rng);
    const double p = permutation_test(x, y, exact_cfg()).p_value;
    for (int k = 0; k < 10; ++k) {
        // paired reordering, as when topic words are listed in another order
        std::vector<std::size_t> order(7);
        for (std::size_t i = 0; i < 7; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<double> xs, ys;
        for (auto i : order) xs.push_back(x[i]), ys.push_back(y[i]);
        EXPECT_EQ(permutation_test(xs, ys, exact_cfg()).p_value, p);
    }
}

TEST(AssociationLabels, SignRule) {
    PoleWordsets poles{"pos", "neg", {"a"}, {"b"}};
    EXPECT_EQ(association_labels(0.5, "CF", "BB", poles), (std::vector<std::string>{"CF ~ pos", "BB ~ neg"}));
    EXPECT_EQ(association_labels(-0.7391, "CF", "BB", poles), (std::vector<std::string>{"CF ~ neg", "BB ~ pos"}));
    EXPECT_EQ(association_labels(0.0, "CF", "BB", poles), (std::vector<std::string>{"CF ~ pos", "BB ~ neg"}));
}

TEST(RunSweat, ToyFixture) {
    Toy t;
    auto r = run_sweat(t.topic, t.s1, t.s2, t.poles, exact_cfg());
    EXPECT_EQ(r.stats.score, 2.0);
    EXPECT_EQ(r.stats.effect_size, 2.0);
    EXPECT_EQ(r.stats.permutation.p_value, 0.5);
    EXPECT_EQ(r.stats.permutation.n_permutations, 2u);
    ASSERT_EQ(r.per_word.size(), 1u);
    EXPECT_EQ(r.per_word[0].space_1, 1.0);
    EXPECT_EQ(r.per_word[0].space_2, -1.0);
    EXPECT_EQ(r.stats.associations, (std::vector<std::string>{"E1 ~ A", "E2 ~ B"}));
}

TEST(RunSweat, IdenticalSpacesGiveZeroScore) {
    auto f = make_polarized_fixture(3);
    auto r = run_sweat(f.topic, f.space1, f.space1, f.poles, {});
    EXPECT_EQ(r.stats.score, 0.0);
    EXPECT_EQ(r.stats.associations[0], "S1 ~ positive");
    EXPECT_GT(r.stats.permutation.p_value, 0.5);
}

TEST(RunSweat, PolarizedFixtureIsSignificant) {
    auto f = make_polarized_fixture(11);
    PermutationConfig cfg;
    cfg.seed = 5;
    auto r = run_sweat(f.topic, f.space1, f.space2, f.poles, cfg);
    EXPECT_GT(r.stats.score, 0.0);
    EXPECT_GT(std::abs(r.stats.effect_size), 1.0);
    EXPECT_LT(r.stats.permutation.p_value, 0.01);
    EXPECT_EQ(r.stats.permutation.method, PermutationMode::montecarlo); // C(24,12) > 500k
    double decomposed = 0;
    for (const auto& w : r.per_word) decomposed += w.space_1 - w.space_2;
    EXPECT_NEAR(decomposed, r.stats.score, 1e-9);
}

TEST(RunSweat, ScalingSpacesKeepsLabelsAndP) {
    auto f = make_polarized_fixture(12, 10, 4, 5);
    const auto scale = [](const EmbeddingSpace& s, double k) {
        auto d = s.data();
        for (auto& x : d) x *= k;
        return EmbeddingSpace(s.label(), s.dimension(), s.words(), d);
    };
    auto base = run_sweat(f.topic, f.space1, f.space2, f.poles, exact_cfg());
    auto scaled = run_sweat(f.topic, scale(f.space1, 3.5), scale(f.space2, 3.5), f.poles, exact_cfg());
    EXPECT_EQ(base.stats.associations, scaled.stats.associations);
    EXPECT_EQ(base.stats.permutation.p_value, scaled.stats.permutation.p_value);
    EXPECT_NEAR(base.stats.score, scaled.stats.score, 1e-12);
}

TEST(RunWeat, ToyAndPoleSwap) {
    auto s = make_space("E", {{"x", {1.0, 0.0}}, {"y", {0.0, 1.0}}, {"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
    PoleWordsets poles{"A", "B", {"a"}, {"b"}};
    auto r = run_weat({"X", {"x"}}, {"Y", {"y"}}, s, poles, exact_cfg());
    EXPECT_EQ(r.stats.score, 2.0);
    EXPECT_EQ(r.stats.effect_size, 2.0);
    EXPECT_EQ(r.stats.permutation.p_value, 0.5);
    EXPECT_EQ(r.stats.associations, (std::vector<std::string>{"X ~ A", "Y ~ B"}));
    auto swapped = run_weat({"X", {"x"}}, {"Y", {"y"}}, s, poles.swapped(), exact_cfg());
    EXPECT_EQ(swapped.stats.score, -2.0);
    EXPECT_EQ(swapped.stats.associations, r.stats.associations);
    EXPECT_EQ(swapped.stats.permutation.p_value, r.stats.permutation.p_value);
    EXPECT_EQ(std::abs(swapped.stats.effect_size), std::abs(r.stats.effect_size));
}

TEST(RunWeat, PoleSwapOnRandomGroupsKeepsPAndMagnitude) {
    auto s = random_space("r", 30, 6, 13);
    PoleWordsets poles{"A", "B", {"w0", "w1", "w2"}, {"w3", "w4", "w5"}};
    TopicWordset x{"X", {"w6", "w7", "w8", "w9", "w10"}}, y{"Y", {"w11", "w12", "w13", "w14", "w15"}};
    auto r = run_weat(x, y, s, poles, exact_cfg());
    auto sw = run_weat(x, y, s, poles.swapped(), exact_cfg());
    EXPECT_EQ(r.stats.permutation.p_value, sw.stats.permutation.p_value);
    EXPECT_NEAR(std::abs(r.stats.effect_size), std::abs(sw.stats.effect_size), 1e-12);
    EXPECT_EQ(r.stats.score, -sw.stats.score);
}
