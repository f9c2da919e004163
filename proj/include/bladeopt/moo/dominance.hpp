#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "bladeopt/core/error.hpp"
#include "bladeopt/objectives/fitness.hpp"

namespace bladeopt {

// u dominates v: no worse in every objective and strictly better in one.
inline bool dominates(const std::vector<double>& u, const std::vector<double>& v, const std::vector<Sense>& senses) {
    BLADEOPT_REQUIRE(u.size() == v.size() && u.size() == senses.size(), DomainError, "dominates: length mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = senses[i] == Sense::minimize ? u[i] : -u[i];
        const double b = senses[i] == Sense::minimize ? v[i] : -v[i];
        if (a > b) return false;
        if (a < b) strict = true;
    }
    return strict;
}

// Indices (ascending) of the points no other point dominates. Equal points
// do not dominate each other, so duplicates survive together.
//
// Points are visited in lexicographic order of their minimization-normalized
// objectives; a point can only be dominated by one visited earlier, and by
// transitivity it suffices to test the survivors so far.
inline std::vector<std::size_t> nondominated_filter(const std::vector<std::vector<double>>& pts,
                                                    const std::vector<Sense>& senses) {
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> norm(n);
    for (std::size_t i = 0; i < n; ++i) {
        BLADEOPT_REQUIRE(pts[i].size() == senses.size(), DomainError, "nondominated_filter: length mismatch");
        norm[i] = pts[i];
        for (std::size_t k = 0; k < senses.size(); ++k)
            if (senses[k] == Sense::maximize) norm[i][k] = -norm[i][k];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norm[a] < norm[b]; });
    const std::vector<Sense> mins(senses.size(), Sense::minimize);
    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
        const bool dominated =
            std::any_of(kept.begin(), kept.end(), [&](std::size_t k) { return dominates(norm[k], norm[i], mins); });
        if (!dominated) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace bladeopt
