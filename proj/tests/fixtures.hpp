#ifndef SWEAT_TESTS_FIXTURES_HPP
#define SWEAT_TESTS_FIXTURES_HPP

#include <random>

#include "support.hpp"
#include "sweat/association.hpp"

namespace sweat::testing {

/// Two spaces sharing stable poles (A near e1, B near e2). The topic sits
/// near e1 in space 1 and near e2 in space 2; the control topic sits near e3
/// with identical vectors in both spaces.
struct PolarizedFixture {
    EmbeddingSpace space1;
    EmbeddingSpace space2;
    PoleWordsets poles;
    TopicWordset topic;
    TopicWordset control;
};

inline PolarizedFixture make_polarized_fixture(std::uint64_t seed, std::size_t dim = 10, std::size_t pole_size = 8,
                                               std::size_t topic_size = 12, double sigma = 0.1) {
    std::mt19937_64 rng(seed);
    std::vector<Row> rows1, rows2;
    PoleWordsets poles{"positive", "negative", {}, {}};
    TopicWordset topic{"topic", {}};
    TopicWordset control{"control", {}};
    for (std::size_t i = 0; i < pole_size; ++i) {
        auto v = near_axis(rng, dim, 0, sigma);
        poles.words_a.push_back("pos" + std::to_string(i));
        rows1.push_back({poles.words_a.back(), v});
        rows2.push_back({poles.words_a.back(), v});
    }
    for (std::size_t i = 0; i < pole_size; ++i) {
        auto v = near_axis(rng, dim, 1, sigma);
        poles.words_b.push_back("neg" + std::to_string(i));
        rows1.push_back({poles.words_b.back(), v});
        rows2.push_back({poles.words_b.back(), v});
    }
    for (std::size_t i = 0; i < topic_size; ++i) {
        topic.words.push_back("topic" + std::to_string(i));
        rows1.push_back({topic.words.back(), near_axis(rng, dim, 0, sigma)});
        rows2.push_back({topic.words.back(), near_axis(rng, dim, 1, sigma)});
    }
    for (std::size_t i = 0; i < topic_size; ++i) {
        auto v = near_axis(rng, dim, 2, sigma);
        control.words.push_back("ctrl" + std::to_string(i));
        rows1.push_back({control.words.back(), v});
        rows2.push_back({control.words.back(), v});
    }
    return {make_space("S1", rows1), make_space("S2", rows2), poles, topic, control};
}

} // namespace sweat::testing

#endif
