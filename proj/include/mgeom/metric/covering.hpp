#pragma once
#ifndef MGEOM_METRIC_COVERING_HPP
#define MGEOM_METRIC_COVERING_HPP

#include <mgeom/metric/space.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace mgeom {

/// Minimum r-net cardinality, or a certified interval when flagged inexact.
struct CoveringCount {
    std::size_t lower = 0;
    std::size_t upper = 0;
    std::string method;

    bool exact() const { return lower == upper; }
    std::size_t value() const {
        if (!exact()) throw DomainError("covering count is only known within [" + std::to_string(lower) + ", " +
                                        std::to_string(upper) + "]");
        return lower;
    }
};

inline constexpr std::size_t kExactCoverLimit = 24;

namespace detail {

/// Smallest number of masks covering `full`; masks are closed balls.
class ExactCover {
public:
    ExactCover(std::vector<std::uint32_t> balls, std::uint32_t full) : balls_(std::move(balls)), full_(full) {}

    std::size_t solve(std::size_t upper) {
        best_ = upper;
        search(0, 0);
        return best_;
    }

private:
    void search(std::uint32_t covered, std::size_t used) {
        if (covered == full_) {
            best_ = std::min(best_, used);
            return;
        }
        if (used + 1 >= best_) return;
        std::uint32_t open = full_ & ~covered;
        // Every remaining ball covers at most `widest` new points.
        std::size_t widest = 1;
        for (auto b : balls_) widest = std::max<std::size_t>(widest, std::popcount(b & open));
        std::size_t need = (std::popcount(open) + widest - 1) / widest;
        if (used + need >= best_) return;
        // Branch on the open point with the fewest covering balls.
        int pick = -1;
        std::size_t fewest = SIZE_MAX;
        for (int p = 0; p < 32; ++p) {
            if (!(open >> p & 1u)) continue;
            std::size_t c = 0;
            for (auto b : balls_) c += (b >> p) & 1u;
            if (c < fewest) {
                fewest = c;
                pick = p;
            }
        }
        std::vector<std::uint32_t> options;
        for (auto b : balls_)
            if (b >> pick & 1u) options.push_back(b);
        std::sort(options.begin(), options.end(), [&](auto x, auto y) {
            return std::popcount(x & open) > std::popcount(y & open);
        });
        for (auto b : options) search(covered | b, used + 1);
    }

    std::vector<std::uint32_t> balls_;
    std::uint32_t full_;
    std::size_t best_ = 0;
};

}  // namespace detail

/**
 * @brief Minimum number of closed r-balls centred in the space covering it.
 *
 * Ultrametric kinds use the ball partition. General metrics run exact set
 * cover up to 24 points and otherwise return [lower, upper] where upper is
 * greedy and lower is the best of a 2r-packing and greedy / H(max ball size).
 */
template <Scalar T>
CoveringCount covering_oracle(const BasicSpace<T>& s, const T& r) {
    if (!(r > 0)) throw DomainError("covering radius must be positive");
    const std::size_t n = s.size();
    if (is_ultra(s.kind())) {
        std::vector<bool> done(n, false);
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            ++count;
            for (std::size_t j = i; j < n; ++j)
                if (s(i, j) <= r) done[j] = true;
        }
        return {count, count, "ultrametric-partition"};
    }

    std::vector<std::vector<std::size_t>> ball(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (s(i, j) <= r) ball[i].push_back(j);

    // Greedy cover.
    std::vector<bool> covered(n, false);
    std::size_t left = n, greedy = 0, widest = 1;
    for (const auto& b : ball) widest = std::max(widest, b.size());
    while (left > 0) {
        std::size_t best = 0, gain = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t g = 0;
            for (auto j : ball[i]) g += !covered[j];
            if (g > gain) {
                gain = g;
                best = i;
            }
        }
        for (auto j : ball[best]) {
            if (!covered[j]) {
                covered[j] = true;
                --left;
            }
        }
        ++greedy;
    }

    if (n <= kExactCoverLimit) {
        std::vector<std::uint32_t> masks;
        for (const auto& b : ball) {
            std::uint32_t m = 0;
            for (auto j : b) m |= 1u << j;
            masks.push_back(m);
        }
        std::sort(masks.begin(), masks.end());
        masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
        std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
        std::size_t v = detail::ExactCover(std::move(masks), full).solve(greedy + 1);
        v = std::min(v, greedy);
        return {v, v, "exact-set-cover"};
    }

    // Points pairwise farther than 2r need separate balls.
    std::vector<std::size_t> packing;
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (auto p : packing) {
            if (s(i, p) <= r + r) {
                ok = false;
                break;
            }
        }
        if (ok) packing.push_back(i);
    }
    double harmonic = 0;
    for (std::size_t k = 1; k <= widest; ++k) harmonic += 1.0 / static_cast<double>(k);
    auto ratio_lower = static_cast<std::size_t>(std::ceil(static_cast<double>(greedy) / harmonic - 1e-9));
    std::size_t lower = std::max<std::size_t>({1, packing.size(), ratio_lower});
    return {std::min(lower, greedy), greedy, "greedy-interval"};
}

}  // namespace mgeom

#endif  // MGEOM_METRIC_COVERING_HPP
