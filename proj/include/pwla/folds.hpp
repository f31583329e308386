#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pwla/dataset.hpp"
#include "pwla/error.hpp"
#include "pwla/rng.hpp"

namespace pwla {

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments; // per instance, in [0,k)
    std::vector<std::string> warnings;

    std::vector<std::size_t> fold_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] == fold) out.push_back(i);
        return out;
    }
    std::vector<std::size_t> out_of_fold_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] != fold) out.push_back(i);
        return out;
    }
};

// Stratified assignment: instances are grouped by class, shuffled within the
// class, and dealt round-robin in one continuous sweep. Per-fold class counts
// and overall fold sizes both stay within 1 of each other.
inline FoldPlan make_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw config_error("fold count must be at least 2, got " + std::to_string(k));
    FoldPlan plan;
    const std::size_t n = ds.size();
    if (k > n) {
        plan.warnings.push_back("k=" + std::to_string(k) + " exceeds instance count " +
                                std::to_string(n) + "; clamped to " + std::to_string(n));
        k = n;
    }
    Rng rng(seed);
    std::vector<std::size_t> order;
    order.reserve(n);
    for (int label : {0, 1}) {
        std::vector<std::size_t> cls;
        for (std::size_t i = 0; i < n; ++i)
            if (ds.labels[i] == label) cls.push_back(i);
        if (cls.size() < k)
            plan.warnings.push_back("class " + std::to_string(label) + " has " +
                                    std::to_string(cls.size()) + " instances, fewer than k=" +
                                    std::to_string(k) + "; some folds will miss it");
        rng.shuffle(cls);
        order.insert(order.end(), cls.begin(), cls.end());
    }
    const std::size_t offset = rng.below(static_cast<std::uint32_t>(k));
    plan.k = k;
    plan.assignments.assign(n, 0);
    for (std::size_t p = 0; p < n; ++p) plan.assignments[order[p]] = (p + offset) % k;
    return plan;
}

} // namespace pwla
