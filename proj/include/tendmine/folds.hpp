#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "dataset.hpp"

namespace tendmine {

struct Fold {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> test_rows;  // positions in the source dataset, ascending
};

namespace detail {

/// Uniform integer in [0, bound) from raw engine output by rejection, so the
/// sequence is the same on every standard library.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

}  // namespace detail

/// Shuffles with `seed`, groups rows by class (class order, unlabeled rows
/// last) and deals them round-robin into k folds. Each fold's count for a
/// class is floor or ceil of n_c / k.
inline std::vector<Fold> stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > d.size())
        throw std::invalid_argument("fold count " + std::to_string(k) + " outside [2, " + std::to_string(d.size()) +
                                    "]");
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    detail::shuffle(order, rng);

    const std::size_t num_classes = d.schema().num_classes();
    std::vector<std::vector<std::size_t>> by_class(num_classes + 1);
    for (auto r : order) {
        auto c = d.class_of(d[r]);
        by_class[c ? *c : num_classes].push_back(r);
    }

    std::vector<std::size_t> fold_of(d.size());
    std::size_t position = 0;
    for (auto& group : by_class)
        for (auto r : group) fold_of[r] = position++ % k;

    std::vector<Fold> folds(k);
    std::vector<std::vector<Instance>> train(k), test(k);
    for (std::size_t r = 0; r < d.size(); ++r) {
        for (std::size_t f = 0; f < k; ++f) {
            if (fold_of[r] == f) {
                test[f].push_back(d[r]);
                folds[f].test_rows.push_back(r);
            } else {
                train[f].push_back(d[r]);
            }
        }
    }
    for (std::size_t f = 0; f < k; ++f) {
        folds[f].train = d.with_instances(std::move(train[f]));
        folds[f].test = d.with_instances(std::move(test[f]));
    }
    return folds;
}

}  // namespace tendmine
