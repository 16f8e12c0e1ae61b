#include "pedsim/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pedsim/errors.hpp"

namespace pedsim {

namespace {

std::int32_t cell_coord(double v, double cell_size) {
    return static_cast<std::int32_t>(std::floor(v / cell_size));
}

std::uint64_t cell_key(std::int32_t cx, std::int32_t cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
}

}  // namespace

void UniformGrid::build(std::span<const GridPoint> points, double cell_size) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size))
        throw InputError("grid cell_size must be positive and finite");
    for (const GridPoint& p : points)
        if (!p.position.finite())
            throw InputError("grid point " + std::to_string(p.id) +
                             " has a non-finite position");

    cell_size_ = cell_size;
    points_.assign(points.begin(), points.end());
    std::sort(points_.begin(), points_.end(),
              [](const GridPoint& a, const GridPoint& b) { return a.id < b.id; });

    const std::uint32_t n = static_cast<std::uint32_t>(points_.size());
    slots_.resize(n);
    buckets_.clear();
    min_cx_ = max_cx_ = min_cy_ = max_cy_ = 0;
    if (n == 0) return;

    // group slots by key; the pair sort tie-breaks on the slot, and slots
    // follow id order, so every bucket lists its points ascending by id
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        const auto [cx, cy] = cell_of(points_[s].position);
        keyed[s] = {cell_key(cx, cy), s};
        if (s == 0) {
            min_cx_ = max_cx_ = cx;
            min_cy_ = max_cy_ = cy;
        } else {
            min_cx_ = std::min(min_cx_, cx);
            max_cx_ = std::max(max_cx_, cx);
            min_cy_ = std::min(min_cy_, cy);
            max_cy_ = std::max(max_cy_, cy);
        }
    }
    std::sort(keyed.begin(), keyed.end());

    for (std::uint32_t s = 0; s < n; ++s) {
        slots_[s] = keyed[s].second;
        if (s == 0 || keyed[s].first != keyed[s - 1].first)
            buckets_.push_back({keyed[s].first, s, 1});
        else
            buckets_.back().count += 1;
    }
}

std::pair<std::int32_t, std::int32_t> UniformGrid::cell_of(Vec2 p) const {
    return {cell_coord(p.x, cell_size_), cell_coord(p.y, cell_size_)};
}

const UniformGrid::Bucket* UniformGrid::find_bucket(std::int32_t cx,
                                                    std::int32_t cy) const {
    const std::uint64_t key = cell_key(cx, cy);
    auto it = std::lower_bound(
        buckets_.begin(), buckets_.end(), key,
        [](const Bucket& b, std::uint64_t k) { return b.key < k; });
    if (it == buckets_.end() || it->key != key) return nullptr;
    return &*it;
}

std::vector<std::uint32_t> UniformGrid::bucket(std::int32_t cx,
                                               std::int32_t cy) const {
    std::vector<std::uint32_t> ids;
    const Bucket* b = find_bucket(cx, cy);
    if (!b) return ids;
    ids.reserve(b->count);
    for (std::uint32_t s = b->begin; s < b->begin + b->count; ++s)
        ids.push_back(points_[slots_[s]].id);
    return ids;
}

void UniformGrid::nearest_k(Vec2 query, int k, std::uint32_t exclude,
                            std::vector<std::uint32_t>& out) const {
    out.clear();
    if (k <= 0 || points_.empty()) return;

    const auto [qcx, qcy] = cell_of(query);
    // ring radius after which every grid cell has been visited
    const std::int32_t last_ring = std::max(
        std::max(std::abs(qcx - min_cx_), std::abs(qcx - max_cx_)),
        std::max(std::abs(qcy - min_cy_), std::abs(qcy - max_cy_)));

    std::vector<std::pair<double, std::uint32_t>> cand;

    auto scan_cell = [&](std::int32_t cx, std::int32_t cy) {
        const Bucket* b = find_bucket(cx, cy);
        if (!b) return;
        for (std::uint32_t s = b->begin; s < b->begin + b->count; ++s) {
            const GridPoint& p = points_[slots_[s]];
            if (p.id == exclude) continue;
            cand.emplace_back(dist2(query, p.position), p.id);
        }
    };

    for (std::int32_t ring = 0; ring <= last_ring; ++ring) {
        if (ring == 0) {
            scan_cell(qcx, qcy);
        } else {
            for (std::int32_t dx = -ring; dx <= ring; ++dx) {
                scan_cell(qcx + dx, qcy - ring);
                scan_cell(qcx + dx, qcy + ring);
            }
            for (std::int32_t dy = -ring + 1; dy <= ring - 1; ++dy) {
                scan_cell(qcx - ring, qcy + dy);
                scan_cell(qcx + ring, qcy + dy);
            }
        }
        if (cand.size() >= static_cast<std::size_t>(k)) {
            std::sort(cand.begin(), cand.end());
            // every unscanned point sits at least ring*cell_size away; stop
            // only when the kth candidate is strictly closer than that
            const double bound = static_cast<double>(ring) * cell_size_;
            if (cand[k - 1].first < bound * bound) break;
        }
    }

    std::sort(cand.begin(), cand.end());
    const std::size_t take = std::min(cand.size(), static_cast<std::size_t>(k));
    out.resize(take);
    for (std::size_t i = 0; i < take; ++i) out[i] = cand[i].second;
}

UniformGrid build_grid(std::span<const GridPoint> points, double cell_size) {
    UniformGrid g;
    g.build(points, cell_size);
    return g;
}

std::vector<std::uint32_t> nearest_k(const UniformGrid& g, Vec2 query, int k,
                                     std::uint32_t exclude) {
    std::vector<std::uint32_t> out;
    g.nearest_k(query, k, exclude, out);
    return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> overlapping_pairs(
    const UniformGrid& g, std::span<const Vec2> positions,
    std::span<const double> radii) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    if (g.empty()) return pairs;

    double r_max = 0.0;
    for (const GridPoint& p : g.points_) r_max = std::max(r_max, radii[p.id]);

    for (const GridPoint& pa : g.points_) {
        const std::uint32_t a = pa.id;
        const Vec2 pos_a = positions[a];
        const double reach = radii[a] + r_max;
        const auto [cx0, cy0] = g.cell_of({pos_a.x - reach, pos_a.y - reach});
        const auto [cx1, cy1] = g.cell_of({pos_a.x + reach, pos_a.y + reach});
        for (std::int32_t cx = cx0; cx <= cx1; ++cx) {
            for (std::int32_t cy = cy0; cy <= cy1; ++cy) {
                const UniformGrid::Bucket* bk = g.find_bucket(cx, cy);
                if (!bk) continue;
                for (std::uint32_t s = bk->begin; s < bk->begin + bk->count; ++s) {
                    const std::uint32_t b = g.points_[g.slots_[s]].id;
                    if (b <= a) continue;
                    const double r_sum = radii[a] + radii[b];
                    if (dist2(pos_a, positions[b]) < r_sum * r_sum)
                        pairs.emplace_back(a, b);
                }
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

}  // namespace pedsim
