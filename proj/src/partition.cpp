#include "blockprox/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blockprox {

BlockPartition::BlockPartition(std::vector<std::size_t> boundaries)
    : boundaries_(std::move(boundaries)) {
    if (boundaries_.size() < 2) {
        throw InvalidPartitionError("partition needs at least one block");
    }
    if (boundaries_.front() != 0) {
        throw InvalidPartitionError("partition must start at coordinate 0");
    }
    for (std::size_t i = 1; i < boundaries_.size(); ++i) {
        if (boundaries_[i] <= boundaries_[i - 1]) {
            throw InvalidPartitionError("partition boundaries must be strictly increasing");
        }
    }
}

std::size_t BlockPartition::block_of(std::size_t j) const {
    auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), j);
    return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

BlockPartition make_partition(std::size_t n, std::size_t s) {
    if (s == 0 || s > n) {
        throw InvalidPartitionError("invalid partition: need 1 <= s <= n, got s=" +
                                    std::to_string(s) + ", n=" + std::to_string(n));
    }
    const std::size_t base = n / s;
    const std::size_t extra = n % s;  // first `extra` blocks get base+1 coordinates
    std::vector<std::size_t> bounds(s + 1);
    bounds[0] = 0;
    for (std::size_t i = 0; i < s; ++i) {
        bounds[i + 1] = bounds[i] + base + (i < extra ? 1 : 0);
    }
    return BlockPartition(std::move(bounds));
}

BlockVector::BlockVector(std::vector<double> v, BlockPartition p)
    : values(std::move(v)), partition(std::move(p)) {
    if (values.size() != partition.dim()) {
        throw ConfigError("BlockVector length does not match partition dimension");
    }
}

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace blockprox
