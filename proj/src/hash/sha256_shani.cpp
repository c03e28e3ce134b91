// SHA-256 compression on the x86 SHA extensions. Compiled with -msha -msse4.1.

#include <immintrin.h>

#include "kernels.hpp"

namespace mtswarm::sha256::detail {

void compress_shani(std::uint32_t* state, const Byte* blocks, std::size_t nblocks) {
    const __m128i byte_swap = _mm_set_epi64x(0x0c0d0e0f08090a0bULL, 0x0405060700010203ULL);

    __m128i tmp = _mm_loadu_si128(reinterpret_cast<const __m128i*>(state));
    __m128i state1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(state + 4));
    tmp = _mm_shuffle_epi32(tmp, 0xB1);              // CDAB
    state1 = _mm_shuffle_epi32(state1, 0x1B);        // EFGH
    __m128i state0 = _mm_alignr_epi8(tmp, state1, 8);  // ABEF
    state1 = _mm_blend_epi16(state1, tmp, 0xF0);     // CDGH

    for (std::size_t blk = 0; blk < nblocks; ++blk) {
        const Byte* data = blocks + 64 * blk;
        const __m128i abef_save = state0;
        const __m128i cdgh_save = state1;

        __m128i msg[4];
        for (int q = 0; q < 4; ++q) {
            msg[q] = _mm_shuffle_epi8(
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(data + 16 * q)), byte_swap);
        }

        for (int g = 0; g < 16; ++g) {
            const __m128i x = msg[g & 3];
            __m128i m = _mm_add_epi32(
                x, _mm_loadu_si128(reinterpret_cast<const __m128i*>(kRoundConstants.data() + 4 * g)));
            state1 = _mm_sha256rnds2_epu32(state1, state0, m);
            if (g >= 3 && g <= 14) {
                const __m128i carry = _mm_alignr_epi8(x, msg[(g + 3) & 3], 4);
                msg[(g + 1) & 3] = _mm_sha256msg2_epu32(_mm_add_epi32(msg[(g + 1) & 3], carry), x);
            }
            m = _mm_shuffle_epi32(m, 0x0E);
            state0 = _mm_sha256rnds2_epu32(state0, state1, m);
            if (g >= 1 && g <= 12) {
                msg[(g + 3) & 3] = _mm_sha256msg1_epu32(msg[(g + 3) & 3], x);
            }
        }

        state0 = _mm_add_epi32(state0, abef_save);
        state1 = _mm_add_epi32(state1, cdgh_save);
    }

    tmp = _mm_shuffle_epi32(state0, 0x1B);        // FEBA
    state1 = _mm_shuffle_epi32(state1, 0xB1);     // DCHG
    state0 = _mm_blend_epi16(tmp, state1, 0xF0);  // DCBA
    state1 = _mm_alignr_epi8(state1, tmp, 8);     // ABEF
    _mm_storeu_si128(reinterpret_cast<__m128i*>(state), state0);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(state + 4), state1);
}

void hash64_shani(const Byte* in, Byte* out, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
        std::uint32_t state[8];
        for (int j = 0; j < 8; ++j) state[j] = kInitialState[j];
        compress_shani(state, in + 64 * k, 1);
        compress_shani(state, kPadBlock64.data(), 1);
        for (int j = 0; j < 8; ++j) store_be32(out + 32 * k + 4 * j, state[j]);
    }
}

}  // namespace mtswarm::sha256::detail
