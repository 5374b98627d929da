#include "forkscope/artifact_id.hpp"

#include <algorithm>

#include <openssl/sha.h>

#include "forkscope/error.hpp"

namespace forkscope {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

ArtifactId::ArtifactId(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 20 && bytes.size() != 32)
        throw InvalidArgument("artifact id must be 20 or 32 bytes, got " +
                              std::to_string(bytes.size()));
    std::copy(bytes.begin(), bytes.end(), bytes_.begin());
    width_ = static_cast<std::uint8_t>(bytes.size());
}

ArtifactId ArtifactId::from_hex(std::string_view hex) {
    if (hex.size() != 40 && hex.size() != 64)
        throw ParseError("hex id must have 40 or 64 digits: '" + std::string(hex) + "'");
    std::array<std::uint8_t, kMaxWidth> raw{};
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw ParseError("invalid hex digit in id '" + std::string(hex) + "'");
        raw[i / 2] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return ArtifactId(std::span<const std::uint8_t>(raw.data(), hex.size() / 2));
}

ArtifactId ArtifactId::sha1_of(std::string_view text) {
    std::array<std::uint8_t, SHA_DIGEST_LENGTH> digest{};
    SHA1(reinterpret_cast<const unsigned char*>(text.data()), text.size(), digest.data());
    return ArtifactId(digest);
}

std::string ArtifactId::hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(2 * width_, '0');
    for (std::size_t i = 0; i < width_; ++i) {
        out[2 * i] = kDigits[bytes_[i] >> 4];
        out[2 * i + 1] = kDigits[bytes_[i] & 0xf];
    }
    return out;
}

std::strong_ordering operator<=>(const ArtifactId& a, const ArtifactId& b) {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.bytes_.begin(), a.bytes_.begin() + a.width_,
                                                  b.bytes_.begin(), b.bytes_.begin() + b.width_);
}

bool looks_like_hex_id(std::string_view text) {
    if (text.size() != 40 && text.size() != 64) return false;
    return std::all_of(text.begin(), text.end(), [](char c) { return hex_value(c) >= 0; });
}

}  // namespace forkscope
