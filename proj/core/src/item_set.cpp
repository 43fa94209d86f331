#include "vallearn/item_set.hpp"

#include <algorithm>

#include "vallearn/error.hpp"

namespace vallearn {

ItemSet::ItemSet(std::uint32_t ground_size) : n_(ground_size), has_bits_(ground_size <= 128) {}

ItemSet ItemSet::from_indices(std::uint32_t ground_size, std::vector<std::uint32_t> indices) {
    ItemSet s(ground_size);
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (std::uint32_t i : indices) {
        if (i >= ground_size)
            throw Error("ItemSet: index " + std::to_string(i) + " out of range [0," +
                        std::to_string(ground_size) + ")");
        if (s.has_bits_) s.bits_[i >> 6] |= 1ULL << (i & 63);
    }
    s.sparse_ = std::move(indices);
    return s;
}

ItemSet ItemSet::from_mask(std::uint32_t ground_size, std::uint64_t mask) {
    if (ground_size > 64) throw Error("ItemSet::from_mask requires ground size <= 64");
    if (ground_size < 64 && (mask >> ground_size) != 0)
        throw Error("ItemSet::from_mask: mask has bits beyond the ground set");
    ItemSet s(ground_size);
    s.bits_[0] = mask;
    for (std::uint32_t i = 0; i < ground_size; ++i)
        if (mask & (1ULL << i)) s.sparse_.push_back(i);
    return s;
}

ItemSet ItemSet::full(std::uint32_t ground_size) {
    ItemSet s(ground_size);
    s.sparse_.resize(ground_size);
    for (std::uint32_t i = 0; i < ground_size; ++i) {
        s.sparse_[i] = i;
        if (s.has_bits_) s.bits_[i >> 6] |= 1ULL << (i & 63);
    }
    return s;
}

ItemSet ItemSet::singleton(std::uint32_t ground_size, std::uint32_t item) {
    return from_indices(ground_size, {item});
}

bool ItemSet::contains(std::uint32_t item) const {
    if (item >= n_) return false;
    if (has_bits_) return (bits_[item >> 6] >> (item & 63)) & 1;
    return std::binary_search(sparse_.begin(), sparse_.end(), item);
}

void ItemSet::insert(std::uint32_t item) {
    if (item >= n_)
        throw Error("ItemSet::insert: index " + std::to_string(item) + " out of range [0," +
                    std::to_string(n_) + ")");
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), item);
    if (it != sparse_.end() && *it == item) return;
    sparse_.insert(it, item);
    if (has_bits_) bits_[item >> 6] |= 1ULL << (item & 63);
}

void ItemSet::erase(std::uint32_t item) {
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), item);
    if (it == sparse_.end() || *it != item) return;
    sparse_.erase(it);
    if (has_bits_) bits_[item >> 6] &= ~(1ULL << (item & 63));
}

std::uint64_t ItemSet::to_mask() const {
    if (n_ > 64) throw Error("ItemSet::to_mask requires ground size <= 64");
    return bits_[0];
}

bool ItemSet::is_subset_of(const ItemSet& other) const {
    require_same_ground(other);
    if (has_bits_)
        return (bits_[0] & ~other.bits_[0]) == 0 && (bits_[1] & ~other.bits_[1]) == 0;
    return std::includes(other.sparse_.begin(), other.sparse_.end(), sparse_.begin(),
                         sparse_.end());
}

ItemSet ItemSet::set_union(const ItemSet& other) const {
    require_same_ground(other);
    std::vector<std::uint32_t> out;
    out.reserve(sparse_.size() + other.sparse_.size());
    std::set_union(sparse_.begin(), sparse_.end(), other.sparse_.begin(), other.sparse_.end(),
                   std::back_inserter(out));
    return from_indices(n_, std::move(out));
}

ItemSet ItemSet::set_intersection(const ItemSet& other) const {
    require_same_ground(other);
    std::vector<std::uint32_t> out;
    std::set_intersection(sparse_.begin(), sparse_.end(), other.sparse_.begin(),
                          other.sparse_.end(), std::back_inserter(out));
    return from_indices(n_, std::move(out));
}

ItemSet ItemSet::set_difference(const ItemSet& other) const {
    require_same_ground(other);
    std::vector<std::uint32_t> out;
    std::set_difference(sparse_.begin(), sparse_.end(), other.sparse_.begin(),
                        other.sparse_.end(), std::back_inserter(out));
    return from_indices(n_, std::move(out));
}

ItemSet ItemSet::complement() const {
    std::vector<std::uint32_t> out;
    out.reserve(n_ - sparse_.size());
    std::size_t k = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
        if (k < sparse_.size() && sparse_[k] == i)
            ++k;
        else
            out.push_back(i);
    }
    return from_indices(n_, std::move(out));
}

std::size_t ItemSet::intersection_count(const ItemSet& other) const {
    require_same_ground(other);
    std::size_t c = 0, i = 0, j = 0;
    while (i < sparse_.size() && j < other.sparse_.size()) {
        if (sparse_[i] < other.sparse_[j])
            ++i;
        else if (sparse_[i] > other.sparse_[j])
            ++j;
        else {
            ++c;
            ++i;
            ++j;
        }
    }
    return c;
}

bool ItemSet::operator==(const ItemSet& other) const {
    return n_ == other.n_ && sparse_ == other.sparse_;
}

bool ItemSet::rep_ok() const {
    if (!std::is_sorted(sparse_.begin(), sparse_.end())) return false;
    if (std::adjacent_find(sparse_.begin(), sparse_.end()) != sparse_.end()) return false;
    if (!sparse_.empty() && sparse_.back() >= n_) return false;
    if (!has_bits_) return n_ > 128;
    std::array<std::uint64_t, 2> expect{0, 0};
    for (std::uint32_t i : sparse_) expect[i >> 6] |= 1ULL << (i & 63);
    std::size_t popcount = 0;
    for (auto word : bits_) popcount += static_cast<std::size_t>(__builtin_popcountll(word));
    return expect == bits_ && popcount == sparse_.size();
}

void ItemSet::require_same_ground(const ItemSet& other) const {
    if (n_ != other.n_)
        throw Error("ItemSet: ground sizes differ (" + std::to_string(n_) + " vs " +
                    std::to_string(other.n_) + ")");
}

}  // namespace vallearn
