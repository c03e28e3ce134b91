#include "mtswarm/merkle_io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace mtswarm::merkle {

namespace {

constexpr std::array<Byte, 4> kTreeMagic{'M', 'T', 'R', 'E'};
constexpr std::array<Byte, 4> kProofMagic{'M', 'T', 'P', 'F'};
constexpr Byte kFileVersion = 0x01;
// Wire/index width caps the usable depth.
constexpr std::size_t kMaxPathLength = 32;

void expect_header(ByteReader& in, const std::array<Byte, 4>& magic) {
    const ByteSpan got = in.take(magic.size());
    if (!std::equal(got.begin(), got.end(), magic.begin())) throw FormatError(in.context() + ": bad magic");
    if (in.u8() != kFileVersion) throw FormatError(in.context() + ": unsupported version");
}

void expect_end(const ByteReader& in) {
    if (in.remaining() != 0) throw FormatError(in.context() + ": trailing bytes");
}

}  // namespace

std::vector<Byte> encode_tree(const MerkleTree& tree) {
    ByteWriter out;
    out.raw(kTreeMagic);
    out.u8(kFileVersion);
    out.u32(static_cast<std::uint32_t>(tree.leaf_count()));
    out.u32(static_cast<std::uint32_t>(tree.padded_leaf_count()));
    for (const auto& level : tree.levels()) {
        for (const Digest32& d : level) out.digest(d);
    }
    return out.take();
}

MerkleTree decode_tree(ByteSpan bytes) {
    ByteReader in(bytes, "tree file");
    expect_header(in, kTreeMagic);
    const std::uint32_t n = in.u32();
    const std::uint32_t padded = in.u32();
    if (n == 0) throw FormatError("tree file: empty mission");
    if (padded != padded_leaf_count(n)) throw FormatError("tree file: padded leaf count does not match n");

    std::vector<std::vector<Digest32>> levels;
    for (std::size_t width = padded; width >= 1; width /= 2) {
        if (in.remaining() < width * kHashSize) throw FormatError("tree file: truncated input");
        auto& level = levels.emplace_back();
        level.reserve(width);
        for (std::size_t j = 0; j < width; ++j) level.push_back(in.digest());
        if (width == 1) break;
    }
    expect_end(in);
    try {
        return MerkleTree::from_levels(n, std::move(levels));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("tree file: ") + e.what());
    }
}

void write_proof_body(ByteWriter& out, const Proof& proof) {
    if (proof.path.size() > kMaxPathLength) throw std::invalid_argument("proof path too long to encode");
    out.u32(proof.op_index);
    out.digest(proof.sensor_hash);
    out.digest(proof.action_hash);
    out.u8(static_cast<std::uint8_t>(proof.path.size()));
    for (const PathStep& step : proof.path) {
        out.u8(static_cast<std::uint8_t>(step.node));
        out.digest(step.sibling);
    }
}

Proof read_proof_body(ByteReader& in) {
    Proof proof;
    proof.op_index = in.u32();
    proof.sensor_hash = in.digest();
    proof.action_hash = in.digest();
    const std::uint8_t path_len = in.u8();
    if (path_len > kMaxPathLength) throw FormatError(in.context() + ": path too long");
    proof.path.reserve(path_len);
    for (std::uint8_t k = 0; k < path_len; ++k) {
        const std::uint8_t position = in.u8();
        if (position > 1) throw FormatError(in.context() + ": bad path position byte");
        proof.path.push_back({static_cast<Position>(position), in.digest()});
    }
    return proof;
}

std::vector<Byte> encode_proof(const Proof& proof) {
    ByteWriter out;
    out.raw(kProofMagic);
    out.u8(kFileVersion);
    write_proof_body(out, proof);
    return out.take();
}

Proof decode_proof(ByteSpan bytes) {
    ByteReader in(bytes, "proof file");
    expect_header(in, kProofMagic);
    Proof proof = read_proof_body(in);
    expect_end(in);
    return proof;
}

std::vector<Byte> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, ByteSpan bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mtswarm::merkle
