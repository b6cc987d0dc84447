#pragma once

#include <algorithm>
#include <cstdint>

namespace gbsval::detail {

// Fixed trajectory grouping for parallel reduction. The partition depends
// only on (trajectories, accumulator size), never on the thread count, so
// results are bit-identical however the groups are scheduled.
struct GroupPartition {
    std::int64_t groups = 1;
    std::int64_t trajectories = 1;

    std::int64_t begin(std::int64_t g) const { return g * trajectories / groups; }
    std::int64_t end(std::int64_t g) const { return (g + 1) * trajectories / groups; }
};

inline GroupPartition make_groups(std::int64_t trajectories, std::int64_t accum_doubles) {
    constexpr std::int64_t kMaxGroups = 256;
    constexpr std::int64_t kBudgetBytes = 1LL << 31; // group partial storage cap
    std::int64_t by_memory = kBudgetBytes / (16 * std::max<std::int64_t>(accum_doubles, 1));
    std::int64_t g = std::clamp<std::int64_t>(std::min(kMaxGroups, by_memory), 1, trajectories);
    return GroupPartition{g, trajectories};
}

} // namespace gbsval::detail
