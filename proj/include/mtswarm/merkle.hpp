#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mtswarm/digest.hpp"

namespace mtswarm::merkle {

Digest32 hash_bytes(ByteSpan data);
Digest32 hash_bytes(std::string_view text);

/// Leaf commitment of one operation: H(h_s || h_a).
Digest32 make_leaf(const Digest32& sensor_hash, const Digest32& action_hash);

/// Leaf placed in the slots between n and the next power of two: SHA-256("").
const Digest32& padding_leaf();

/// Smallest power of two >= n. Throws std::invalid_argument for n == 0.
std::size_t padded_leaf_count(std::size_t n);

/// Hashes in a proof for an n-leaf mission: log2(n̂) + 2.
std::size_t proof_length(std::size_t n);

/// Position of the node being proven at one level of the path.
enum class Position : std::uint8_t { Left = 0, Right = 1 };

struct PathStep {
    Position node = Position::Left;
    Digest32 sibling;

    friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Inclusion proof: the leaf preimage plus the sibling path, leaf to root.
struct Proof {
    std::uint32_t op_index = 0;
    Digest32 sensor_hash;
    Digest32 action_hash;
    std::vector<PathStep> path;

    [[nodiscard]] std::size_t hash_count() const { return path.size() + 2; }

    friend bool operator==(const Proof&, const Proof&) = default;
};

/// Binary hash tree over a mission's leaves, padded to a power of two.
///
/// levels()[0] holds the n̂ leaves and levels().back() the single root.
/// Immutable once built.
class MerkleTree {
public:
    /// Throws std::invalid_argument("empty mission") for an empty list.
    static MerkleTree build(std::span<const Digest32> leaves);

    /// Rebuilds a tree from stored levels, checking shape and every interior hash.
    /// Throws std::invalid_argument on any inconsistency.
    static MerkleTree from_levels(std::size_t leaf_count, std::vector<std::vector<Digest32>> levels);

    [[nodiscard]] std::size_t leaf_count() const { return leaf_count_; }
    [[nodiscard]] std::size_t padded_leaf_count() const { return levels_.front().size(); }
    /// Number of levels including leaves and root: log2(n̂) + 1.
    [[nodiscard]] std::size_t depth() const { return levels_.size(); }
    [[nodiscard]] const Digest32& root() const { return levels_.back().front(); }
    [[nodiscard]] const Digest32& leaf(std::size_t index) const { return levels_.front().at(index); }
    [[nodiscard]] const std::vector<std::vector<Digest32>>& levels() const { return levels_; }

    /// Proof for a real operation. The preimage must hash to the stored leaf.
    /// Throws std::out_of_range for index >= n, std::invalid_argument("unknown preimage")
    /// on a leaf mismatch.
    [[nodiscard]] Proof gen_proof(std::size_t index, const Digest32& sensor_hash, const Digest32& action_hash) const;

private:
    MerkleTree(std::size_t leaf_count, std::vector<std::vector<Digest32>> levels)
        : leaf_count_(leaf_count), levels_(std::move(levels)) {}

    std::size_t leaf_count_ = 0;
    std::vector<std::vector<Digest32>> levels_;
};

/// Recomputes the root bottom-up from the proof. Also requires the path
/// positions to spell out op_index (least significant bit at the leaf).
bool verify_proof(const Digest32& expected_root, const Proof& proof);

}  // namespace mtswarm::merkle
