#include "mtswarm/hash/sha256.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "kernels.hpp"

#if defined(MTSWARM_HAVE_X86_KERNELS)
#include <cpuid.h>
#endif

namespace mtswarm::sha256 {

namespace detail {

const CpuFeatures& cpu_features() {
    static const CpuFeatures features = [] {
        CpuFeatures f;
#if defined(MTSWARM_HAVE_X86_KERNELS)
        unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
        if (!__get_cpuid(1, &eax, &ebx, &ecx, &edx)) return f;
        const bool ssse3 = (ecx & (1u << 9)) != 0;
        const bool sse41 = (ecx & (1u << 19)) != 0;
        const bool osxsave = (ecx & (1u << 27)) != 0;
        const bool avx = (ecx & (1u << 28)) != 0;
        bool ymm_enabled = false;
        if (osxsave && avx) {
            unsigned xcr0_lo = 0, xcr0_hi = 0;
            __asm__ volatile("xgetbv" : "=a"(xcr0_lo), "=d"(xcr0_hi) : "c"(0));
            ymm_enabled = (xcr0_lo & 0x6u) == 0x6u;
        }
        if (__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) {
            f.avx2 = ymm_enabled && (ebx & (1u << 5)) != 0;
            f.sha = ssse3 && sse41 && (ebx & (1u << 29)) != 0;
        }
#endif
        return f;
    }();
    return features;
}

}  // namespace detail

namespace {

detail::KernelOps ops_for(Kernel kernel) {
    switch (kernel) {
#if defined(MTSWARM_HAVE_X86_KERNELS)
        case Kernel::Avx2:
            return {detail::compress_scalar, detail::hash64_avx2};
        case Kernel::ShaNi:
            return {detail::compress_shani, detail::hash64_shani};
#endif
        default:
            return {detail::compress_scalar, detail::hash64_scalar};
    }
}

Kernel best_kernel() {
    if (kernel_available(Kernel::ShaNi)) return Kernel::ShaNi;
    if (kernel_available(Kernel::Avx2)) return Kernel::Avx2;
    return Kernel::Scalar;
}

Kernel initial_kernel() {
    if (const char* forced = std::getenv("MTSWARM_HASH_KERNEL"); forced != nullptr && *forced != '\0') {
        const Kernel k = kernel_from_name(forced);
        if (!kernel_available(k)) {
            throw std::invalid_argument("hash kernel not supported on this CPU: " + std::string(forced));
        }
        return k;
    }
    return best_kernel();
}

std::atomic<int>& active_slot() {
    static std::atomic<int> slot{static_cast<int>(initial_kernel())};
    return slot;
}

Digest32 hash_with(ByteSpan data, const detail::KernelOps& ops) {
    std::uint32_t state[8];
    for (int j = 0; j < 8; ++j) state[j] = detail::kInitialState[j];

    const std::size_t full = data.size() / 64;
    if (full > 0) ops.compress(state, data.data(), full);

    Byte tail[128] = {};
    const std::size_t rest = data.size() - 64 * full;
    if (rest > 0) std::memcpy(tail, data.data() + 64 * full, rest);
    tail[rest] = 0x80;
    const std::size_t tail_blocks = rest + 9 <= 64 ? 1 : 2;
    const std::uint64_t bit_len = static_cast<std::uint64_t>(data.size()) * 8;
    for (int b = 0; b < 8; ++b) {
        tail[64 * tail_blocks - 1 - b] = static_cast<Byte>(bit_len >> (8 * b));
    }
    ops.compress(state, tail, tail_blocks);

    Digest32 out;
    for (int j = 0; j < 8; ++j) detail::store_be32(out.data() + 4 * j, state[j]);
    return out;
}

}  // namespace

std::string_view kernel_name(Kernel kernel) {
    switch (kernel) {
        case Kernel::Scalar: return "scalar";
        case Kernel::Avx2: return "avx2";
        case Kernel::ShaNi: return "shani";
    }
    return "unknown";
}

Kernel kernel_from_name(std::string_view name) {
    if (name == "scalar") return Kernel::Scalar;
    if (name == "avx2") return Kernel::Avx2;
    if (name == "shani") return Kernel::ShaNi;
    throw std::invalid_argument("unknown hash kernel: " + std::string(name));
}

bool kernel_available(Kernel kernel) {
    switch (kernel) {
        case Kernel::Scalar: return true;
#if defined(MTSWARM_HAVE_X86_KERNELS)
        case Kernel::Avx2: return detail::cpu_features().avx2;
        case Kernel::ShaNi: return detail::cpu_features().sha;
#endif
        default: return false;
    }
}

std::vector<Kernel> available_kernels() {
    std::vector<Kernel> out;
    for (Kernel k : {Kernel::Scalar, Kernel::Avx2, Kernel::ShaNi}) {
        if (kernel_available(k)) out.push_back(k);
    }
    return out;
}

Kernel active_kernel() { return static_cast<Kernel>(active_slot().load(std::memory_order_relaxed)); }

void set_active_kernel(Kernel kernel) {
    if (!kernel_available(kernel)) {
        throw std::invalid_argument("hash kernel not supported on this CPU: " + std::string(kernel_name(kernel)));
    }
    active_slot().store(static_cast<int>(kernel), std::memory_order_relaxed);
}

Digest32 hash(ByteSpan data, Kernel kernel) { return hash_with(data, ops_for(kernel)); }

Digest32 hash(ByteSpan data) { return hash(data, active_kernel()); }

Digest32 hash(std::string_view text) {
    return hash(ByteSpan(reinterpret_cast<const Byte*>(text.data()), text.size()));
}

Digest32 hash_pair(const Digest32& left, const Digest32& right) {
    Byte message[64];
    std::memcpy(message, left.data(), kHashSize);
    std::memcpy(message + kHashSize, right.data(), kHashSize);
    Digest32 out;
    ops_for(active_kernel()).hash64(message, out.data(), 1);
    return out;
}

void hash_pairs(std::span<const Digest32> in, std::span<Digest32> out, Kernel kernel) {
    if (in.size() != 2 * out.size()) {
        throw std::invalid_argument("hash_pairs: input must hold exactly two digests per output");
    }
    static_assert(sizeof(Digest32) == kHashSize);
    ops_for(kernel).hash64(reinterpret_cast<const Byte*>(in.data()), reinterpret_cast<Byte*>(out.data()),
                           out.size());
}

void hash_pairs(std::span<const Digest32> in, std::span<Digest32> out) {
    hash_pairs(in, out, active_kernel());
}

}  // namespace mtswarm::sha256
