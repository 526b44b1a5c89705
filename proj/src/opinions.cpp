#include "sourcecr/opinions.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sourcecr {

namespace {

template <typename Id>
std::vector<Id> sorted_unique(std::vector<Id> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

OpinionMatrix::OpinionMatrix(std::span<const NodeId> users, std::span<const ClaimId> claims,
                             std::span<const OpinionRecord> records) {
    std::vector<NodeId> uid(users.begin(), users.end());
    std::vector<ClaimId> cid(claims.begin(), claims.end());
    for (const auto& r : records) {
        uid.push_back(r.user);
        cid.push_back(r.claim);
    }
    user_ids_ = sorted_unique(std::move(uid));
    claim_ids_ = sorted_unique(std::move(cid));
    for (std::uint32_t i = 0; i < user_ids_.size(); ++i) user_index_.emplace(user_ids_[i], i);
    for (std::uint32_t j = 0; j < claim_ids_.size(); ++j) claim_index_.emplace(claim_ids_[j], j);

    rows_.resize(user_ids_.size());
    columns_.resize(claim_ids_.size());
    for (const auto& r : records) {
        if (r.value != 1 && r.value != -1)
            throw std::invalid_argument("opinion value must be +1 or -1");
        const std::uint32_t i = user_index_.at(r.user);
        const std::uint32_t j = claim_index_.at(r.claim);
        rows_[i].push_back({j, r.value});
        columns_[j].push_back({i, r.value});
    }
    auto by_index = [](const Entry& a, const Entry& b) { return a.index < b.index; };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        auto& row = rows_[i];
        std::sort(row.begin(), row.end(), by_index);
        auto dup = std::adjacent_find(row.begin(), row.end(),
                                      [](const Entry& a, const Entry& b) { return a.index == b.index; });
        if (dup != row.end()) {
            throw std::invalid_argument("duplicate opinion for user " + std::to_string(user_ids_[i]) +
                                        " on claim " + std::to_string(claim_ids_[dup->index]));
        }
    }
    for (auto& col : columns_) std::sort(col.begin(), col.end(), by_index);
    entries_ = records.size();
}

std::optional<std::size_t> OpinionMatrix::find_user(NodeId id) const {
    auto it = user_index_.find(id);
    if (it == user_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> OpinionMatrix::find_claim(ClaimId id) const {
    auto it = claim_index_.find(id);
    if (it == claim_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<Opinion> OpinionMatrix::value(std::size_t i, std::size_t j) const {
    const auto& row = rows_.at(i);
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const Entry& e, std::size_t idx) { return e.index < idx; });
    if (it == row.end() || it->index != j) return std::nullopt;
    return it->value;
}

std::vector<std::uint32_t> OpinionMatrix::claims_marked(std::size_t i, Opinion value) const {
    std::vector<std::uint32_t> out;
    for (const auto& e : rows_.at(i)) {
        if (e.value == value) out.push_back(e.index);
    }
    return out;
}

std::vector<OpinionRecord> OpinionMatrix::records() const {
    std::vector<OpinionRecord> out;
    out.reserve(entries_);
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        for (const auto& e : columns_[j]) out.push_back({user_ids_[e.index], claim_ids_[j], e.value});
    }
    return out;
}

OpinionMatrix OpinionMatrix::negated() const {
    auto recs = records();
    for (auto& r : recs) r.value = static_cast<Opinion>(-r.value);
    return OpinionMatrix(user_ids_, claim_ids_, recs);
}

} // namespace sourcecr
