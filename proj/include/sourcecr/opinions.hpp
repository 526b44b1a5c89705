#ifndef SOURCECR_OPINIONS_HPP
#define SOURCECR_OPINIONS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sourcecr/graph.hpp"

namespace sourcecr {

using ClaimId = std::int64_t;

/// +1 (pros / "true") or -1 (cons / "false").
using Opinion = std::int8_t;

struct OpinionRecord {
    NodeId user;
    ClaimId claim;
    Opinion value;
};

/// Sparse user x claim opinion table with both row and column views.
/// Users and claims are densely indexed in ascending id order.
class OpinionMatrix {
public:
    struct Entry {
        std::uint32_t index;  // claim index in a row, user index in a column
        Opinion value;
    };

    OpinionMatrix() = default;

    /// `users` / `claims` fix the universes (ids absent from records are kept
    /// as silent users or claims with no opinions); records may add more.
    /// Throws std::invalid_argument on duplicate (user, claim) pairs or
    /// values other than +1/-1.
    OpinionMatrix(std::span<const NodeId> users, std::span<const ClaimId> claims,
                  std::span<const OpinionRecord> records);

    [[nodiscard]] std::size_t user_count() const noexcept { return user_ids_.size(); }
    [[nodiscard]] std::size_t claim_count() const noexcept { return claim_ids_.size(); }
    [[nodiscard]] std::size_t entry_count() const noexcept { return entries_; }

    [[nodiscard]] NodeId user_id(std::size_t i) const { return user_ids_.at(i); }
    [[nodiscard]] ClaimId claim_id(std::size_t j) const { return claim_ids_.at(j); }
    [[nodiscard]] const std::vector<NodeId>& user_ids() const noexcept { return user_ids_; }
    [[nodiscard]] const std::vector<ClaimId>& claim_ids() const noexcept { return claim_ids_; }
    [[nodiscard]] std::optional<std::size_t> find_user(NodeId id) const;
    [[nodiscard]] std::optional<std::size_t> find_claim(ClaimId id) const;

    /// Opinions user i holds, sorted by claim index.
    [[nodiscard]] std::span<const Entry> row(std::size_t i) const { return rows_.at(i); }
    /// Opinions on claim j (X_j), sorted by user index.
    [[nodiscard]] std::span<const Entry> column(std::size_t j) const { return columns_.at(j); }
    [[nodiscard]] std::optional<Opinion> value(std::size_t i, std::size_t j) const;

    /// Claim indices user i marked with `value` (C^1_i or C^-1_i).
    [[nodiscard]] std::vector<std::uint32_t> claims_marked(std::size_t i, Opinion value) const;

    [[nodiscard]] std::vector<OpinionRecord> records() const;

    /// Same table with every opinion negated.
    [[nodiscard]] OpinionMatrix negated() const;

private:
    std::vector<NodeId> user_ids_;
    std::vector<ClaimId> claim_ids_;
    std::unordered_map<NodeId, std::uint32_t> user_index_;
    std::unordered_map<ClaimId, std::uint32_t> claim_index_;
    std::vector<std::vector<Entry>> rows_;
    std::vector<std::vector<Entry>> columns_;
    std::size_t entries_ = 0;
};

} // namespace sourcecr

#endif // SOURCECR_OPINIONS_HPP
