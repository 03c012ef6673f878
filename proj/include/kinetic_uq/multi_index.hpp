// SPDX-License-Identifier: Apache-2.0
//
// Multi-indices over an unbounded set of parameter dimensions, downward
// closed index sets, and the anchored-neighbor candidate pool used by the
// sampling drivers.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kuq {

/// Finitely supported sequence of nonnegative integers. Dimensions are
/// 1-based. Only nonzero entries are stored, sorted by dimension.
class MultiIndex {
public:
    using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (dimension, multiplicity)

    MultiIndex() = default;

    /// Builds from (dimension, multiplicity) pairs in any order. Zero
    /// multiplicities are dropped; repeated dimensions are an error.
    static MultiIndex from_entries(std::vector<Entry> entries);
    /// Dense constructor: values[0] is dimension 1.
    static MultiIndex from_dense(std::span<const std::uint32_t> values);
    static MultiIndex unit(std::uint32_t dim);

    [[nodiscard]] std::uint32_t operator[](std::uint32_t dim) const noexcept;
    [[nodiscard]] std::span<const Entry> entries() const noexcept { return entries_; }
    [[nodiscard]] bool is_null() const noexcept { return entries_.empty(); }
    /// Largest dimension with a nonzero entry; 0 for the null index.
    [[nodiscard]] std::uint32_t max_dim() const noexcept {
        return entries_.empty() ? 0 : entries_.back().first;
    }
    [[nodiscard]] std::uint32_t max_entry() const noexcept;
    /// |nu| = sum of entries.
    [[nodiscard]] std::uint64_t total() const noexcept;

    [[nodiscard]] MultiIndex incremented(std::uint32_t dim) const;
    /// Requires (*this)[dim] > 0.
    [[nodiscard]] MultiIndex decremented(std::uint32_t dim) const;

    /// Componentwise partial order.
    [[nodiscard]] bool leq(const MultiIndex& other) const noexcept;

    /// Sparse "j:nu_j" serialization, e.g. "1:2,3:1". The null index is "".
    [[nodiscard]] std::string to_string() const;
    static MultiIndex parse(std::string_view text);

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    /// Deterministic total order: (|nu|, J(nu), entries lexicographically).
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept;

private:
    std::vector<Entry> entries_;
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& nu) const noexcept;
};

/// True iff for every member nu and every j in supp(nu), nu - e_j is a member.
[[nodiscard]] bool is_downward_closed(std::span<const MultiIndex> set);

/// Monotone, downward closed index set together with its anchored-neighbor
/// pool. The first member is always the null index.
class IndexSet {
public:
    /// Starts as {0} with pool {e_1}. `d_max` truncates the parameter
    /// dimension; candidates needing dimension d_max + 1 are dropped.
    explicit IndexSet(std::uint32_t d_max);

    [[nodiscard]] std::uint32_t d_max() const noexcept { return d_max_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] std::span<const MultiIndex> members() const noexcept { return members_; }
    [[nodiscard]] const MultiIndex& operator[](std::size_t k) const { return members_.at(k); }
    [[nodiscard]] bool contains(const MultiIndex& nu) const { return lookup_.contains(nu); }

    /// Anchored neighbors, iterated in the deterministic multi-index order.
    [[nodiscard]] const std::set<MultiIndex>& pool() const noexcept { return pool_; }
    /// Candidates removed because they exceed d_max.
    [[nodiscard]] const std::set<MultiIndex>& dropped() const noexcept { return dropped_; }
    /// j(Lambda): largest active dimension.
    [[nodiscard]] std::uint32_t active_dim() const noexcept { return active_dim_; }

    /// Promotes a pool member into the set and updates the pool. Returns the
    /// candidates that entered the pool in this update (N*). Throws
    /// Error(not_admissible) if `nu` is not in the pool.
    std::vector<MultiIndex> add(const MultiIndex& nu);

    /// Pool sizes after each promotion, starting with the initial pool.
    [[nodiscard]] std::span<const std::size_t> pool_size_history() const noexcept {
        return pool_history_;
    }

private:
    std::vector<MultiIndex> update_pool(const MultiIndex& added);
    [[nodiscard]] bool admissible(const MultiIndex& nu) const;

    std::uint32_t d_max_;
    std::uint32_t active_dim_ = 0;
    std::vector<MultiIndex> members_;
    std::set<MultiIndex> lookup_;
    std::set<MultiIndex> pool_;
    std::set<MultiIndex> dropped_;
    std::vector<std::size_t> pool_history_;
};

/// Per-step growth bound on the pool: #N(Lambda_n) <= #N(Lambda_{n-1}) + n,
/// checked over the whole history of `set`. Trivially true for n = 1.
[[nodiscard]] bool pool_size_bound_check(const IndexSet& set);

}  // namespace kuq
