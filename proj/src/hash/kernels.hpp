#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "mtswarm/digest.hpp"

namespace mtswarm::sha256::detail {

inline constexpr std::array<std::uint32_t, 8> kInitialState{
    0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

inline constexpr std::array<std::uint32_t, 64> kRoundConstants{
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

// Second block of every 64-byte message: 0x80, zeros, bit length 512.
inline constexpr std::array<Byte, 64> kPadBlock64 = [] {
    std::array<Byte, 64> block{};
    block[0] = 0x80;
    block[62] = 0x02;
    return block;
}();

// Advances `state` over `nblocks` consecutive 64-byte blocks.
using CompressFn = void (*)(std::uint32_t* state, const Byte* blocks, std::size_t nblocks);
// Hashes `count` independent 64-byte messages into `out` (count * 32 bytes).
using Hash64Fn = void (*)(const Byte* in, Byte* out, std::size_t count);

struct KernelOps {
    CompressFn compress;
    Hash64Fn hash64;
};

void compress_scalar(std::uint32_t* state, const Byte* blocks, std::size_t nblocks);
void hash64_scalar(const Byte* in, Byte* out, std::size_t count);

#if defined(MTSWARM_HAVE_X86_KERNELS)
void hash64_avx2(const Byte* in, Byte* out, std::size_t count);
void compress_shani(std::uint32_t* state, const Byte* blocks, std::size_t nblocks);
void hash64_shani(const Byte* in, Byte* out, std::size_t count);
#endif

struct CpuFeatures {
    bool avx2 = false;
    bool sha = false;
};

const CpuFeatures& cpu_features();

inline void store_be32(Byte* p, std::uint32_t v) {
    p[0] = static_cast<Byte>(v >> 24);
    p[1] = static_cast<Byte>(v >> 16);
    p[2] = static_cast<Byte>(v >> 8);
    p[3] = static_cast<Byte>(v);
}

inline std::uint32_t load_be32(const Byte* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
           (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

}  // namespace mtswarm::sha256::detail
