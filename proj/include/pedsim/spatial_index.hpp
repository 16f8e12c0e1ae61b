#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pedsim/vec2.hpp"

namespace pedsim {

struct GridPoint {
    std::uint32_t id = 0;
    Vec2 position;
};

// Sentinel for nearest-neighbor queries that exclude nothing.
inline constexpr std::uint32_t kNoExclude = 0xffffffffu;

// Uniform grid over 2D points. Buckets are keyed by integer cell coordinates
// (floor(x/cell), floor(y/cell)); every inserted id lands in exactly one
// bucket. Query results depend only on the point set, never on insertion
// order (ties broken by ascending id).
class UniformGrid {
public:
    UniformGrid() = default;

    // Rebuilds the grid, reusing capacity. Throws InputError on non-positive
    // cell size or non-finite coordinates.
    void build(std::span<const GridPoint> points, double cell_size);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    double cell_size() const { return cell_size_; }

    std::pair<std::int32_t, std::int32_t> cell_of(Vec2 p) const;

    // Ids in one bucket, ascending. Empty for absent buckets.
    std::vector<std::uint32_t> bucket(std::int32_t cx, std::int32_t cy) const;

    std::size_t bucket_count() const { return buckets_.size(); }

    // The k nearest stored points to query (excluding id `exclude`), ordered
    // by ascending distance with ties broken by ascending id. Expands cell
    // rings only as far as correctness requires.
    void nearest_k(Vec2 query, int k, std::uint32_t exclude,
                   std::vector<std::uint32_t>& out) const;

    // All stored (id, position) pairs, ascending by id.
    std::span<const GridPoint> points() const { return points_; }

private:
    friend std::vector<std::pair<std::uint32_t, std::uint32_t>> overlapping_pairs(
        const UniformGrid&, std::span<const Vec2>, std::span<const double>);

    struct Bucket {
        std::uint64_t key = 0;
        std::uint32_t begin = 0;
        std::uint32_t count = 0;
    };

    const Bucket* find_bucket(std::int32_t cx, std::int32_t cy) const;

    double cell_size_ = 0.0;
    std::vector<GridPoint> points_;       // sorted by id
    std::vector<std::uint32_t> slots_;    // indices into points_, grouped by bucket
    std::vector<Bucket> buckets_;         // sorted by key
    std::int32_t min_cx_ = 0, max_cx_ = 0;
    std::int32_t min_cy_ = 0, max_cy_ = 0;
};

UniformGrid build_grid(std::span<const GridPoint> points, double cell_size);

std::vector<std::uint32_t> nearest_k(const UniformGrid& g, Vec2 query, int k,
                                     std::uint32_t exclude);

// All unordered pairs (a, b), a < b, whose disks overlap strictly:
// dist < radii[a] + radii[b]. positions/radii are indexed by the grid's ids,
// and the grid must have been built over (id, positions[id]). Output sorted
// lexicographically. Correct for any cell size.
std::vector<std::pair<std::uint32_t, std::uint32_t>> overlapping_pairs(
    const UniformGrid& g, std::span<const Vec2> positions,
    std::span<const double> radii);

}  // namespace pedsim
