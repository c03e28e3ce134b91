#include "mtswarm/merkle.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "mtswarm/hash/sha256.hpp"

namespace mtswarm::merkle {

namespace {

std::vector<Digest32> parent_level(const std::vector<Digest32>& children) {
    std::vector<Digest32> parents(children.size() / 2);
    sha256::hash_pairs(children, parents);
    return parents;
}

}  // namespace

Digest32 hash_bytes(ByteSpan data) { return sha256::hash(data); }

Digest32 hash_bytes(std::string_view text) { return sha256::hash(text); }

Digest32 make_leaf(const Digest32& sensor_hash, const Digest32& action_hash) {
    return sha256::hash_pair(sensor_hash, action_hash);
}

const Digest32& padding_leaf() {
    static const Digest32 empty = sha256::hash(ByteSpan{});
    return empty;
}

std::size_t padded_leaf_count(std::size_t n) {
    if (n == 0) throw std::invalid_argument("leaf count must be at least 1");
    return std::bit_ceil(n);
}

std::size_t proof_length(std::size_t n) {
    return static_cast<std::size_t>(std::countr_zero(padded_leaf_count(n))) + 2;
}

MerkleTree MerkleTree::build(std::span<const Digest32> leaves) {
    if (leaves.empty()) throw std::invalid_argument("empty mission");

    std::vector<std::vector<Digest32>> levels;
    levels.emplace_back(leaves.begin(), leaves.end());
    levels.front().resize(merkle::padded_leaf_count(leaves.size()), padding_leaf());
    while (levels.back().size() > 1) {
        levels.push_back(parent_level(levels.back()));
    }
    return MerkleTree(leaves.size(), std::move(levels));
}

MerkleTree MerkleTree::from_levels(std::size_t leaf_count, std::vector<std::vector<Digest32>> levels) {
    if (leaf_count == 0) throw std::invalid_argument("empty mission");
    const std::size_t padded = merkle::padded_leaf_count(leaf_count);
    const std::size_t expected_depth = static_cast<std::size_t>(std::countr_zero(padded)) + 1;
    if (levels.size() != expected_depth) throw std::invalid_argument("tree has the wrong number of levels");
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k].size() != (padded >> k)) {
            throw std::invalid_argument("tree level " + std::to_string(k) + " has the wrong width");
        }
    }
    for (std::size_t j = leaf_count; j < padded; ++j) {
        if (levels[0][j] != padding_leaf()) throw std::invalid_argument("padding slot holds a non-padding leaf");
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (parent_level(levels[k - 1]) != levels[k]) {
            throw std::invalid_argument("tree level " + std::to_string(k) + " does not hash its children");
        }
    }
    return MerkleTree(leaf_count, std::move(levels));
}

Proof MerkleTree::gen_proof(std::size_t index, const Digest32& sensor_hash, const Digest32& action_hash) const {
    if (index >= leaf_count_) {
        throw std::out_of_range("operation index " + std::to_string(index) + " out of range");
    }
    if (make_leaf(sensor_hash, action_hash) != levels_.front()[index]) {
        throw std::invalid_argument("unknown preimage");
    }
    Proof proof;
    proof.op_index = static_cast<std::uint32_t>(index);
    proof.sensor_hash = sensor_hash;
    proof.action_hash = action_hash;
    proof.path.reserve(levels_.size() - 1);
    std::size_t pos = index;
    for (std::size_t k = 0; k + 1 < levels_.size(); ++k) {
        const bool is_right = (pos & 1) != 0;
        proof.path.push_back({is_right ? Position::Right : Position::Left, levels_[k][pos ^ 1]});
        pos >>= 1;
    }
    return proof;
}

bool verify_proof(const Digest32& expected_root, const Proof& proof) {
    if (proof.path.size() < 32 && (proof.op_index >> proof.path.size()) != 0) return false;
    if (proof.path.size() > 32) return false;

    Digest32 current = make_leaf(proof.sensor_hash, proof.action_hash);
    for (std::size_t k = 0; k < proof.path.size(); ++k) {
        const PathStep& step = proof.path[k];
        const bool bit = ((proof.op_index >> k) & 1u) != 0;
        if (bit != (step.node == Position::Right)) return false;
        current = step.node == Position::Left ? sha256::hash_pair(current, step.sibling)
                                              : sha256::hash_pair(step.sibling, current);
    }
    return current == expected_root;
}

}  // namespace mtswarm::merkle
