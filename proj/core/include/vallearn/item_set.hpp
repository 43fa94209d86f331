#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace vallearn {

// Subset of a ground set {0, ..., n-1}.  Keeps a sorted index list always,
// plus a 128-bit mask when n <= 128 so membership tests on small ground
// sets are O(1).  Both views are maintained on every mutation.
class ItemSet {
public:
    explicit ItemSet(std::uint32_t ground_size);

    static ItemSet from_indices(std::uint32_t ground_size, std::vector<std::uint32_t> indices);
    static ItemSet from_mask(std::uint32_t ground_size, std::uint64_t mask);
    static ItemSet full(std::uint32_t ground_size);
    static ItemSet singleton(std::uint32_t ground_size, std::uint32_t item);

    std::uint32_t ground_size() const { return n_; }
    std::size_t count() const { return sparse_.size(); }
    bool empty() const { return sparse_.empty(); }

    bool contains(std::uint32_t item) const;
    void insert(std::uint32_t item);
    void erase(std::uint32_t item);

    // Sorted member indices.
    const std::vector<std::uint32_t>& indices() const { return sparse_; }

    // Bitmask view; requires ground_size() <= 64.
    std::uint64_t to_mask() const;

    bool is_subset_of(const ItemSet& other) const;
    ItemSet set_union(const ItemSet& other) const;
    ItemSet set_intersection(const ItemSet& other) const;
    ItemSet set_difference(const ItemSet& other) const;
    ItemSet complement() const;
    std::size_t intersection_count(const ItemSet& other) const;

    bool operator==(const ItemSet& other) const;
    bool operator!=(const ItemSet& other) const { return !(*this == other); }

    // True when the mask view (if present) agrees with the sorted list;
    // exercised by the representation tests.
    bool rep_ok() const;

private:
    void require_same_ground(const ItemSet& other) const;

    std::uint32_t n_ = 0;
    bool has_bits_ = false;
    std::array<std::uint64_t, 2> bits_{0, 0};
    std::vector<std::uint32_t> sparse_;
};

}  // namespace vallearn
