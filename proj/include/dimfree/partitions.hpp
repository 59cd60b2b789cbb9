#ifndef DIMFREE_PARTITIONS_HPP
#define DIMFREE_PARTITIONS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dimfree/error.hpp"
#include "dimfree/scalar.hpp"

namespace dimfree {

// Disjoint cover of {0, ..., K-1}. Literal syntax and from_one_based use 1-based indices.
class IndexPartition {
public:
    IndexPartition() = default;

    IndexPartition(int k, std::vector<std::vector<int>> blocks) : k_(k), blocks_(std::move(blocks)) {
        detail::require(k >= 1, Errc::PartitionMismatch, "partition needs at least one index");
        std::vector<int> seen(static_cast<size_t>(k), 0);
        for (const auto& b : blocks_) {
            detail::require(!b.empty(), Errc::PartitionMismatch, "empty block");
            for (int i : b) {
                detail::require(i >= 0 && i < k, Errc::PartitionMismatch,
                                "index " + std::to_string(i + 1) + " outside 1.." + std::to_string(k));
                detail::require(seen[static_cast<size_t>(i)]++ == 0, Errc::PartitionMismatch,
                                "index " + std::to_string(i + 1) + " appears twice");
            }
        }
        for (int i = 0; i < k; ++i)
            detail::require(seen[static_cast<size_t>(i)] == 1, Errc::PartitionMismatch,
                            "index " + std::to_string(i + 1) + " not covered");
        for (const auto& b : blocks_) tau_ = std::max(tau_, static_cast<int>(b.size()));
    }

    static IndexPartition from_one_based(int k, const std::vector<std::vector<int>>& blocks) {
        std::vector<std::vector<int>> zb = blocks;
        for (auto& b : zb)
            for (int& i : b) i -= 1;
        return IndexPartition(k, std::move(zb));
    }

    int element_count() const { return k_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    int tau() const { return tau_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (size_t i = 0; i < blocks_.size(); ++i) {
            if (i) os << ',';
            os << '[';
            for (size_t j = 0; j < blocks_[i].size(); ++j) {
                if (j) os << ',';
                os << blocks_[i][j] + 1;
            }
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    int k_ = 0;
    int tau_ = 0;
    std::vector<std::vector<int>> blocks_;
};

// Consecutive pairs (1,2),(3,4),...; a trailing singleton when K is odd.
inline IndexPartition pairing_partition(int k) {
    detail::require(k >= 1, Errc::PartitionMismatch, "K must be >= 1");
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < k; i += 2) {
        if (i + 1 < k) blocks.push_back({i, i + 1});
        else blocks.push_back({i});
    }
    return IndexPartition(k, std::move(blocks));
}

// Pairs indices after sorting envelope values descending, largest with largest.
inline IndexPartition sorted_pairing_partition(const std::vector<double>& envelopes) {
    const int k = static_cast<int>(envelopes.size());
    detail::require(k >= 1, Errc::PartitionMismatch, "need at least one envelope");
    std::vector<int> order(static_cast<size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return envelopes[a] > envelopes[b]; });
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < k; i += 2) {
        if (i + 1 < k) blocks.push_back({order[i], order[i + 1]});
        else blocks.push_back({order[i]});
    }
    return IndexPartition(k, std::move(blocks));
}

inline IndexPartition whole_set_partition(int k) {
    detail::require(k >= 1, Errc::PartitionMismatch, "K must be >= 1");
    std::vector<int> all(static_cast<size_t>(k));
    std::iota(all.begin(), all.end(), 0);
    return IndexPartition(k, {all});
}

inline IndexPartition singleton_partition(int k) {
    detail::require(k >= 1, Errc::PartitionMismatch, "K must be >= 1");
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < k; ++i) blocks.push_back({i});
    return IndexPartition(k, std::move(blocks));
}

// True when I <= ln(dim) / ((1 + exponential_offset(tau)) ((mu+1)^tau - 1)).
inline bool check_block_count_condition(int block_count, int tau, double mu_u, double dim) {
    detail::require(block_count >= 1 && tau >= 1 && dim >= 1.0 && mu_u >= 0.0,
                    Errc::NonPositiveArgument, "invalid block-count condition arguments");
    if (mu_u == 0.0) return true;
    double denom = (1.0 + exponential_offset(tau)) * std::expm1(tau * std::log1p(mu_u));
    return block_count <= std::log(dim) / denom;
}

// True when I <= 4 ln(dim) / (phi_pair ((mu+1)^2 - 1)).
inline bool check_azuma_count_condition(int block_count, double mu_u, double phi_pair, double dim) {
    detail::require(block_count >= 1 && dim >= 1.0 && mu_u >= 0.0 && phi_pair >= 0.0,
                    Errc::NonPositiveArgument, "invalid pairing-count condition arguments");
    if (mu_u == 0.0 || phi_pair == 0.0) return true;
    double denom = phi_pair * ((mu_u + 1.0) * (mu_u + 1.0) - 1.0);
    return block_count <= 4.0 * std::log(dim) / denom;
}

} // namespace dimfree

#endif
