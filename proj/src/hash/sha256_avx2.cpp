// Eight-lane multi-buffer SHA-256 over 64-byte messages. Compiled with -mavx2
// and only reached after the dispatcher confirmed AVX2 support.

#include <immintrin.h>

#include <bit>

#include "kernels.hpp"

namespace mtswarm::sha256::detail {

namespace {

inline __m256i rotr(__m256i x, int n) {
    return _mm256_or_si256(_mm256_srli_epi32(x, n), _mm256_slli_epi32(x, 32 - n));
}
inline __m256i add(__m256i a, __m256i b) { return _mm256_add_epi32(a, b); }
inline __m256i bxor(__m256i a, __m256i b) { return _mm256_xor_si256(a, b); }

inline __m256i big_sigma0(__m256i x) { return bxor(bxor(rotr(x, 2), rotr(x, 13)), rotr(x, 22)); }
inline __m256i big_sigma1(__m256i x) { return bxor(bxor(rotr(x, 6), rotr(x, 11)), rotr(x, 25)); }
inline __m256i small_sigma0(__m256i x) {
    return bxor(bxor(rotr(x, 7), rotr(x, 18)), _mm256_srli_epi32(x, 3));
}
inline __m256i small_sigma1(__m256i x) {
    return bxor(bxor(rotr(x, 17), rotr(x, 19)), _mm256_srli_epi32(x, 10));
}

// In-place 8x8 transpose of 32-bit elements.
void transpose8(__m256i r[8]) {
    const __m256i t0 = _mm256_unpacklo_epi32(r[0], r[1]);
    const __m256i t1 = _mm256_unpackhi_epi32(r[0], r[1]);
    const __m256i t2 = _mm256_unpacklo_epi32(r[2], r[3]);
    const __m256i t3 = _mm256_unpackhi_epi32(r[2], r[3]);
    const __m256i t4 = _mm256_unpacklo_epi32(r[4], r[5]);
    const __m256i t5 = _mm256_unpackhi_epi32(r[4], r[5]);
    const __m256i t6 = _mm256_unpacklo_epi32(r[6], r[7]);
    const __m256i t7 = _mm256_unpackhi_epi32(r[6], r[7]);
    const __m256i u0 = _mm256_unpacklo_epi64(t0, t2);
    const __m256i u1 = _mm256_unpackhi_epi64(t0, t2);
    const __m256i u2 = _mm256_unpacklo_epi64(t1, t3);
    const __m256i u3 = _mm256_unpackhi_epi64(t1, t3);
    const __m256i u4 = _mm256_unpacklo_epi64(t4, t6);
    const __m256i u5 = _mm256_unpackhi_epi64(t4, t6);
    const __m256i u6 = _mm256_unpacklo_epi64(t5, t7);
    const __m256i u7 = _mm256_unpackhi_epi64(t5, t7);
    r[0] = _mm256_permute2x128_si256(u0, u4, 0x20);
    r[1] = _mm256_permute2x128_si256(u1, u5, 0x20);
    r[2] = _mm256_permute2x128_si256(u2, u6, 0x20);
    r[3] = _mm256_permute2x128_si256(u3, u7, 0x20);
    r[4] = _mm256_permute2x128_si256(u0, u4, 0x31);
    r[5] = _mm256_permute2x128_si256(u1, u5, 0x31);
    r[6] = _mm256_permute2x128_si256(u2, u6, 0x31);
    r[7] = _mm256_permute2x128_si256(u3, u7, 0x31);
}

inline __m256i bswap32(__m256i x) {
    const __m256i mask = _mm256_setr_epi8(
        3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8, 15, 14, 13, 12,
        3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8, 15, 14, 13, 12);
    return _mm256_shuffle_epi8(x, mask);
}

// K[t] + W[t] for the constant padding block.
const std::array<std::uint32_t, 64> kPadScheduleWithK = [] {
    std::array<std::uint32_t, 64> w{};
    for (int t = 0; t < 16; ++t) w[t] = load_be32(kPadBlock64.data() + 4 * t);
    for (int t = 16; t < 64; ++t) {
        const auto s0 = std::rotr(w[t - 15], 7) ^ std::rotr(w[t - 15], 18) ^ (w[t - 15] >> 3);
        const auto s1 = std::rotr(w[t - 2], 17) ^ std::rotr(w[t - 2], 19) ^ (w[t - 2] >> 10);
        w[t] = s1 + w[t - 7] + s0 + w[t - 16];
    }
    for (int t = 0; t < 64; ++t) w[t] += kRoundConstants[t];
    return w;
}();

struct LaneState {
    __m256i v[8];
};

inline void round(LaneState& s, int t, __m256i kw) {
    __m256i& a = s.v[(0 - t) & 7];
    __m256i& b = s.v[(1 - t) & 7];
    __m256i& c = s.v[(2 - t) & 7];
    __m256i& d = s.v[(3 - t) & 7];
    __m256i& e = s.v[(4 - t) & 7];
    __m256i& f = s.v[(5 - t) & 7];
    __m256i& g = s.v[(6 - t) & 7];
    __m256i& h = s.v[(7 - t) & 7];
    const __m256i ch = bxor(_mm256_and_si256(e, f), _mm256_andnot_si256(e, g));
    const __m256i maj = _mm256_or_si256(_mm256_and_si256(a, b), _mm256_and_si256(c, _mm256_or_si256(a, b)));
    const __m256i t1 = add(add(add(h, big_sigma1(e)), ch), kw);
    const __m256i t2 = add(big_sigma0(a), maj);
    d = add(d, t1);
    h = add(t1, t2);
}

// Register rotation is folded into the index arithmetic above: after round t
// the variable that played `h` now holds the new `a`.
void compress8(LaneState& state, const __m256i block[16]) {
    LaneState s = state;
    __m256i w[16];
    for (int t = 0; t < 16; ++t) {
        w[t] = block[t];
        round(s, t, add(w[t], _mm256_set1_epi32(static_cast<int>(kRoundConstants[t]))));
    }
    for (int t = 16; t < 64; ++t) {
        const __m256i wt = add(add(small_sigma1(w[(t - 2) & 15]), w[(t - 7) & 15]),
                               add(small_sigma0(w[(t - 15) & 15]), w[t & 15]));
        w[t & 15] = wt;
        round(s, t, add(wt, _mm256_set1_epi32(static_cast<int>(kRoundConstants[t]))));
    }
    for (int j = 0; j < 8; ++j) state.v[j] = add(state.v[j], s.v[j]);
}

void compress8_pad(LaneState& state) {
    LaneState s = state;
    for (int t = 0; t < 64; ++t) {
        round(s, t, _mm256_set1_epi32(static_cast<int>(kPadScheduleWithK[t])));
    }
    for (int j = 0; j < 8; ++j) state.v[j] = add(state.v[j], s.v[j]);
}

void hash64_x8(const Byte* in, Byte* out) {
    __m256i lo[8];
    __m256i hi[8];
    for (int m = 0; m < 8; ++m) {
        lo[m] = bswap32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + 64 * m)));
        hi[m] = bswap32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + 64 * m + 32)));
    }
    transpose8(lo);
    transpose8(hi);
    __m256i block[16];
    for (int t = 0; t < 8; ++t) {
        block[t] = lo[t];
        block[t + 8] = hi[t];
    }

    LaneState state;
    for (int j = 0; j < 8; ++j) state.v[j] = _mm256_set1_epi32(static_cast<int>(kInitialState[j]));
    compress8(state, block);
    compress8_pad(state);

    transpose8(state.v);
    for (int m = 0; m < 8; ++m) {
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 32 * m), bswap32(state.v[m]));
    }
}

}  // namespace

void hash64_avx2(const Byte* in, Byte* out, std::size_t count) {
    std::size_t k = 0;
    for (; k + 8 <= count; k += 8) {
        hash64_x8(in + 64 * k, out + 32 * k);
    }
    if (k < count) {
        hash64_scalar(in + 64 * k, out + 32 * k, count - k);
    }
}

}  // namespace mtswarm::sha256::detail
