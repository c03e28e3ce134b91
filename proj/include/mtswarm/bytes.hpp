#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtswarm/digest.hpp"
#include "mtswarm/error.hpp"

namespace mtswarm {

/// Appends little-endian integers and raw digests to a byte buffer.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) {
        for (int k = 0; k < 2; ++k) buf_.push_back(static_cast<Byte>(v >> (8 * k)));
    }
    void u32(std::uint32_t v) {
        for (int k = 0; k < 4; ++k) buf_.push_back(static_cast<Byte>(v >> (8 * k)));
    }
    void raw(ByteSpan bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
    void digest(const Digest32& d) { raw(d.span()); }

    [[nodiscard]] std::size_t size() const { return buf_.size(); }
    std::vector<Byte>& buffer() { return buf_; }
    std::vector<Byte> take() { return std::move(buf_); }

private:
    std::vector<Byte> buf_;
};

/// Bounds-checked little-endian reader. Every short read throws FormatError
/// prefixed with the reader context.
class ByteReader {
public:
    ByteReader(ByteSpan bytes, std::string context) : bytes_(bytes), context_(std::move(context)) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() {
        const auto b = take(2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    std::uint32_t u32() {
        const auto b = take(4);
        return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
               (std::uint32_t{b[3]} << 24);
    }
    Digest32 digest() { return Digest32::from_span(take(kHashSize)); }
    ByteSpan take(std::size_t count) {
        if (remaining() < count) throw FormatError(context_ + ": truncated input");
        const ByteSpan out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }
    [[nodiscard]] std::size_t position() const { return pos_; }
    [[nodiscard]] const std::string& context() const { return context_; }

private:
    ByteSpan bytes_;
    std::size_t pos_ = 0;
    std::string context_;
};

}  // namespace mtswarm
