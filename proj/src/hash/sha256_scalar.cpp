#include <bit>

#include "kernels.hpp"

namespace mtswarm::sha256::detail {

namespace {

inline std::uint32_t big_sigma0(std::uint32_t x) {
    return std::rotr(x, 2) ^ std::rotr(x, 13) ^ std::rotr(x, 22);
}
inline std::uint32_t big_sigma1(std::uint32_t x) {
    return std::rotr(x, 6) ^ std::rotr(x, 11) ^ std::rotr(x, 25);
}
inline std::uint32_t small_sigma0(std::uint32_t x) {
    return std::rotr(x, 7) ^ std::rotr(x, 18) ^ (x >> 3);
}
inline std::uint32_t small_sigma1(std::uint32_t x) {
    return std::rotr(x, 17) ^ std::rotr(x, 19) ^ (x >> 10);
}

void compress_block(std::uint32_t* state, const Byte* block) {
    std::uint32_t w[64];
    for (int t = 0; t < 16; ++t) {
        w[t] = load_be32(block + 4 * t);
    }
    for (int t = 16; t < 64; ++t) {
        w[t] = small_sigma1(w[t - 2]) + w[t - 7] + small_sigma0(w[t - 15]) + w[t - 16];
    }

    std::uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
    std::uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
    for (int t = 0; t < 64; ++t) {
        const std::uint32_t ch = (e & f) ^ (~e & g);
        const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        const std::uint32_t t1 = h + big_sigma1(e) + ch + kRoundConstants[t] + w[t];
        const std::uint32_t t2 = big_sigma0(a) + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state[0] += a;
    state[1] += b;
    state[2] += c;
    state[3] += d;
    state[4] += e;
    state[5] += f;
    state[6] += g;
    state[7] += h;
}

}  // namespace

void compress_scalar(std::uint32_t* state, const Byte* blocks, std::size_t nblocks) {
    for (std::size_t k = 0; k < nblocks; ++k) {
        compress_block(state, blocks + 64 * k);
    }
}

void hash64_scalar(const Byte* in, Byte* out, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
        std::uint32_t state[8];
        for (int j = 0; j < 8; ++j) state[j] = kInitialState[j];
        compress_block(state, in + 64 * k);
        compress_block(state, kPadBlock64.data());
        for (int j = 0; j < 8; ++j) store_be32(out + 32 * k + 4 * j, state[j]);
    }
}

}  // namespace mtswarm::sha256::detail
