// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/multi_index.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "kinetic_uq/error.hpp"
#include "log.hpp"

namespace kuq {

MultiIndex MultiIndex::from_entries(std::vector<Entry> entries) {
    std::erase_if(entries, [](const Entry& e) { return e.second == 0; });
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first == 0) {
            throw Error(ErrorCode::invalid_argument, "multi-index dimensions are 1-based");
        }
        if (i > 0 && entries[i].first == entries[i - 1].first) {
            throw Error(ErrorCode::invalid_argument,
                        "multi-index has repeated dimension " + std::to_string(entries[i].first));
        }
    }
    MultiIndex nu;
    nu.entries_ = std::move(entries);
    return nu;
}

MultiIndex MultiIndex::from_dense(std::span<const std::uint32_t> values) {
    std::vector<Entry> entries;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (values[j] != 0) entries.emplace_back(static_cast<std::uint32_t>(j + 1), values[j]);
    }
    MultiIndex nu;
    nu.entries_ = std::move(entries);
    return nu;
}

MultiIndex MultiIndex::unit(std::uint32_t dim) {
    return from_entries({{dim, 1}});
}

std::uint32_t MultiIndex::operator[](std::uint32_t dim) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                               [](const Entry& e, std::uint32_t d) { return e.first < d; });
    return (it != entries_.end() && it->first == dim) ? it->second : 0;
}

std::uint32_t MultiIndex::max_entry() const noexcept {
    std::uint32_t m = 0;
    for (const auto& e : entries_) m = std::max(m, e.second);
    return m;
}

std::uint64_t MultiIndex::total() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), std::uint64_t{0},
                           [](std::uint64_t s, const Entry& e) { return s + e.second; });
}

MultiIndex MultiIndex::incremented(std::uint32_t dim) const {
    if (dim == 0) throw Error(ErrorCode::invalid_argument, "multi-index dimensions are 1-based");
    MultiIndex out = *this;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), dim,
                               [](const Entry& e, std::uint32_t d) { return e.first < d; });
    if (it != out.entries_.end() && it->first == dim) {
        ++it->second;
    } else {
        out.entries_.insert(it, Entry{dim, 1});
    }
    return out;
}

MultiIndex MultiIndex::decremented(std::uint32_t dim) const {
    MultiIndex out = *this;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), dim,
                               [](const Entry& e, std::uint32_t d) { return e.first < d; });
    if (it == out.entries_.end() || it->first != dim) {
        throw Error(ErrorCode::invalid_argument,
                    "cannot decrement zero entry " + std::to_string(dim) + " of " + to_string());
    }
    if (--it->second == 0) out.entries_.erase(it);
    return out;
}

bool MultiIndex::leq(const MultiIndex& other) const noexcept {
    for (const auto& [dim, value] : entries_) {
        if (value > other[dim]) return false;
    }
    return true;
}

std::string MultiIndex::to_string() const {
    std::string out;
    for (const auto& [dim, value] : entries_) {
        if (!out.empty()) out += ',';
        out += std::to_string(dim);
        out += ':';
        out += std::to_string(value);
    }
    return out;
}

MultiIndex MultiIndex::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    std::vector<Entry> entries;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = trim(text.substr(0, comma));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw Error(ErrorCode::invalid_argument, "malformed multi-index entry '" + std::string(item) + "'");
        }
        std::uint32_t dim = 0;
        std::uint32_t value = 0;
        auto key = item.substr(0, colon);
        auto val = item.substr(colon + 1);
        auto r1 = std::from_chars(key.data(), key.data() + key.size(), dim);
        auto r2 = std::from_chars(val.data(), val.data() + val.size(), value);
        if (r1.ec != std::errc{} || r1.ptr != key.data() + key.size() || r2.ec != std::errc{} ||
            r2.ptr != val.data() + val.size()) {
            throw Error(ErrorCode::invalid_argument, "malformed multi-index entry '" + std::string(item) + "'");
        }
        entries.emplace_back(dim, value);
    }
    return from_entries(std::move(entries));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept {
    if (auto c = a.total() <=> b.total(); c != 0) return c;
    if (auto c = a.max_dim() <=> b.max_dim(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                  b.entries_.begin(), b.entries_.end());
}

std::size_t MultiIndexHash::operator()(const MultiIndex& nu) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& [dim, value] : nu.entries()) {
        h = (h ^ dim) * 0x100000001b3ULL;
        h = (h ^ value) * 0x100000001b3ULL;
    }
    return h;
}

bool is_downward_closed(std::span<const MultiIndex> set) {
    std::set<MultiIndex> lookup(set.begin(), set.end());
    for (const auto& nu : set) {
        for (const auto& [dim, value] : nu.entries()) {
            if (!lookup.contains(nu.decremented(dim))) return false;
        }
    }
    return true;
}

IndexSet::IndexSet(std::uint32_t d_max) : d_max_(d_max) {
    if (d_max == 0) throw Error(ErrorCode::invalid_argument, "index set needs d_max >= 1");
    members_.emplace_back();
    lookup_.insert(members_.back());
    update_pool(members_.back());
    pool_history_.push_back(pool_.size());
}

bool IndexSet::admissible(const MultiIndex& nu) const {
    for (const auto& [dim, value] : nu.entries()) {
        if (!lookup_.contains(nu.decremented(dim))) return false;
    }
    return true;
}

std::vector<MultiIndex> IndexSet::add(const MultiIndex& nu) {
    auto it = pool_.find(nu);
    if (it == pool_.end()) {
        throw Error(ErrorCode::not_admissible,
                    "index '" + nu.to_string() + "' is not an anchored neighbor of the current set");
    }
    // `nu` may refer to the pool entry itself.
    members_.push_back(nu);
    pool_.erase(it);
    lookup_.insert(members_.back());
    active_dim_ = std::max(active_dim_, members_.back().max_dim());
    auto fresh = update_pool(members_.back());
    pool_history_.push_back(pool_.size());
    return fresh;
}

std::vector<MultiIndex> IndexSet::update_pool(const MultiIndex& added) {
    // Candidate margin: the next inactive direction plus every admissible
    // forward neighbor of the newly added index within the active dimensions.
    std::vector<MultiIndex> proposed;
    proposed.push_back(MultiIndex::unit(active_dim_ + 1));
    for (std::uint32_t j = 1; j <= active_dim_; ++j) proposed.push_back(added.incremented(j));

    std::vector<MultiIndex> fresh;
    for (auto& candidate : proposed) {
        if (candidate.max_dim() > d_max_) {
            if (dropped_.insert(candidate).second) {
                detail::logger().warn("anchored neighbor '{}' exceeds d_max = {}; dropped",
                                      candidate.to_string(), d_max_);
            }
            continue;
        }
        if (lookup_.contains(candidate) || pool_.contains(candidate)) continue;
        if (!admissible(candidate)) continue;
        pool_.insert(candidate);
        fresh.push_back(std::move(candidate));
    }
    return fresh;
}

bool pool_size_bound_check(const IndexSet& set) {
    auto history = set.pool_size_history();
    for (std::size_t k = 1; k < history.size(); ++k) {
        const std::size_t n = k + 1;
        if (history[k] > history[k - 1] + n) return false;
    }
    return true;
}

}  // namespace kuq
