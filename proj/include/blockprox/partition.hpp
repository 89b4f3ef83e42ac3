#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "blockprox/errors.hpp"

namespace blockprox {

/// Contiguous decomposition of the coordinate indices {0..n-1} into s blocks.
/// Block i covers [boundaries[i], boundaries[i+1]).
class BlockPartition {
public:
    BlockPartition() = default;

    /// Boundaries must satisfy 0 = c_0 < c_1 < ... < c_s = n.
    explicit BlockPartition(std::vector<std::size_t> boundaries);

    std::size_t dim() const { return boundaries_.empty() ? 0 : boundaries_.back(); }
    std::size_t blocks() const { return boundaries_.empty() ? 0 : boundaries_.size() - 1; }

    std::size_t begin(std::size_t i) const { return boundaries_[i]; }
    std::size_t end(std::size_t i) const { return boundaries_[i + 1]; }
    std::size_t size(std::size_t i) const { return end(i) - begin(i); }

    const std::vector<std::size_t>& boundaries() const { return boundaries_; }

    /// Index of the block containing coordinate j.
    std::size_t block_of(std::size_t j) const;

    bool operator==(const BlockPartition&) const = default;

private:
    std::vector<std::size_t> boundaries_;
};

/// Split {0..n-1} into s contiguous blocks. When s divides n all blocks have
/// size n/s; otherwise the first n%s blocks get the extra coordinate.
BlockPartition make_partition(std::size_t n, std::size_t s);

/// Length-n vector paired with the block structure it is iterated over.
struct BlockVector {
    std::vector<double> values;
    BlockPartition partition;

    BlockVector() = default;
    BlockVector(std::vector<double> v, BlockPartition p);

    std::size_t dim() const { return values.size(); }

    std::span<double> block(std::size_t i) {
        return std::span<double>(values).subspan(partition.begin(i), partition.size(i));
    }
    std::span<const double> block(std::size_t i) const {
        return std::span<const double>(values).subspan(partition.begin(i), partition.size(i));
    }
};

/// True when every entry is finite.
bool all_finite(std::span<const double> v);

}  // namespace blockprox
