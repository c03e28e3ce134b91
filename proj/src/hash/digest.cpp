#include "mtswarm/digest.hpp"

#include <algorithm>
#include <stdexcept>

namespace mtswarm {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Digest32 Digest32::from_span(ByteSpan bytes) {
    if (bytes.size() != kHashSize) {
        throw std::invalid_argument("digest must be exactly 32 bytes");
    }
    Digest32 d;
    std::copy(bytes.begin(), bytes.end(), d.bytes_.begin());
    return d;
}

Digest32 Digest32::from_hex(std::string_view hex) {
    if (hex.size() != 2 * kHashSize) {
        throw std::invalid_argument("digest hex must be 64 characters");
    }
    Digest32 d;
    for (std::size_t k = 0; k < kHashSize; ++k) {
        const int hi = hex_value(hex[2 * k]);
        const int lo = hex_value(hex[2 * k + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("digest hex has a non-hex character");
        d.bytes_[k] = static_cast<Byte>((hi << 4) | lo);
    }
    return d;
}

std::string Digest32::hex() const { return to_hex(bytes_); }

std::string to_hex(ByteSpan bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * bytes.size());
    for (Byte b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

}  // namespace mtswarm
