#pragma once

#include <filesystem>
#include <vector>

#include "mtswarm/bytes.hpp"
#include "mtswarm/merkle.hpp"

/// Binary tree and proof files.
///
///   tree:  "MTRE" 0x01 u32 n, u32 n̂, then every level bottom-up as raw digests
///   proof: "MTPF" 0x01 u32 op_index, h_s, h_a, u8 path_len,
///          path_len x (u8 position, 32-byte sibling)
///
/// Integers are little-endian. The position byte is 0 when the proven node is
/// the left child at that level and 1 when it is the right child.
namespace mtswarm::merkle {

std::vector<Byte> encode_tree(const MerkleTree& tree);
/// Throws FormatError on a bad header, short input, trailing bytes or hashes
/// that do not form a consistent tree.
MerkleTree decode_tree(ByteSpan bytes);

std::vector<Byte> encode_proof(const Proof& proof);
Proof decode_proof(ByteSpan bytes);

/// Proof body shared by the proof file and the protocol's proof frame
/// (op_index, h_s, h_a, path_len, path).
void write_proof_body(ByteWriter& out, const Proof& proof);
Proof read_proof_body(ByteReader& in);

std::vector<Byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteSpan bytes);

}  // namespace mtswarm::merkle
