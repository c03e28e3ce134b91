#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace mtswarm {

using Byte = std::uint8_t;
using ByteSpan = std::span<const Byte>;

inline constexpr std::size_t kHashSize = 32;

/// A SHA-256 output. Equality and ordering are byte-wise.
class Digest32 {
public:
    using Bytes = std::array<Byte, kHashSize>;

    constexpr Digest32() = default;
    constexpr explicit Digest32(const Bytes& bytes) : bytes_(bytes) {}

    static Digest32 from_span(ByteSpan bytes);
    /// Parses 64 hex characters; throws std::invalid_argument otherwise.
    static Digest32 from_hex(std::string_view hex);

    [[nodiscard]] constexpr const Bytes& bytes() const { return bytes_; }
    [[nodiscard]] constexpr Bytes& bytes() { return bytes_; }
    [[nodiscard]] ByteSpan span() const { return bytes_; }
    [[nodiscard]] const Byte* data() const { return bytes_.data(); }
    [[nodiscard]] Byte* data() { return bytes_.data(); }
    [[nodiscard]] static constexpr std::size_t size() { return kHashSize; }

    [[nodiscard]] std::string hex() const;

    friend constexpr bool operator==(const Digest32&, const Digest32&) = default;
    friend constexpr auto operator<=>(const Digest32&, const Digest32&) = default;

private:
    Bytes bytes_{};
};

std::string to_hex(ByteSpan bytes);

}  // namespace mtswarm
