#pragma once

#include <array>
#include <set>
#include <string>

namespace bcvh {

// Landmarks are opaque identifiers, unique within a world. Ids longer than
// 64 UTF-8 bytes are rejected by the canonical encoder.
using LandmarkId = std::string;

inline constexpr size_t kSectorCount = 6;      // 60 degrees of bearing each
inline constexpr size_t kMaxIdBytes = 64;

// A robot's panoramic field of view, abstracted to per-sector landmark-id
// sets. std::set keeps each sector deduplicated and in the canonical
// lexicographic byte order.
struct PanoramicView {
    std::array<std::set<LandmarkId>, kSectorCount> sectors;

    bool operator==(const PanoramicView&) const = default;

    // Sector positions matter for the wire format but not for commonality.
    std::set<LandmarkId> flattened() const {
        std::set<LandmarkId> all;
        for (const auto& sector : sectors) all.insert(sector.begin(), sector.end());
        return all;
    }

    bool contains(const LandmarkId& id) const {
        for (const auto& sector : sectors) {
            if (sector.count(id)) return true;
        }
        return false;
    }

    size_t landmark_count() const {
        size_t n = 0;
        for (const auto& sector : sectors) n += sector.size();
        return n;
    }
};

}  // namespace bcvh
