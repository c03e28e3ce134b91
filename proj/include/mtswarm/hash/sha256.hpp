#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mtswarm/digest.hpp"

/// SHA-256 with interchangeable compression kernels.
///
/// Every kernel computes the same function. The scalar kernel is the
/// reference; the AVX2 kernel hashes eight 64-byte messages per pass and
/// the SHA-NI kernel uses the x86 SHA extensions. The fastest kernel the
/// CPU supports is picked on first use unless MTSWARM_HASH_KERNEL
/// (scalar | avx2 | shani) says otherwise.
namespace mtswarm::sha256 {

enum class Kernel { Scalar, Avx2, ShaNi };

std::string_view kernel_name(Kernel kernel);
/// Throws std::invalid_argument for an unknown name.
Kernel kernel_from_name(std::string_view name);

bool kernel_available(Kernel kernel);
std::vector<Kernel> available_kernels();

Kernel active_kernel();
/// Throws std::invalid_argument if the CPU lacks the kernel.
void set_active_kernel(Kernel kernel);

Digest32 hash(ByteSpan data);
Digest32 hash(ByteSpan data, Kernel kernel);
Digest32 hash(std::string_view text);

/// H(left || right), the 64-byte message used for leaves and interior nodes.
Digest32 hash_pair(const Digest32& left, const Digest32& right);

/// out[k] = H(in[2k] || in[2k+1]). Requires in.size() == 2 * out.size().
void hash_pairs(std::span<const Digest32> in, std::span<Digest32> out);
void hash_pairs(std::span<const Digest32> in, std::span<Digest32> out, Kernel kernel);

}  // namespace mtswarm::sha256
