#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace forkscope {

/// Opaque fixed-width identifier of a development artifact.
///
/// Commits and directories carry intrinsic (content-derived) identifiers, so
/// two artifacts with equal ids are the same artifact in every repository.
/// Origins carry extrinsic identifiers derived from their normalized URL.
/// Both 20-byte (SHA-1) and 32-byte (SHA-256) widths are supported; the width
/// is part of the identity, so ids of different widths never compare equal.
class ArtifactId {
  public:
    static constexpr std::size_t kMaxWidth = 32;

    ArtifactId() = default;

    /// Throws InvalidArgument unless bytes.size() is 20 or 32.
    explicit ArtifactId(std::span<const std::uint8_t> bytes);

    /// Parses 40 or 64 hex digits (either case). Throws ParseError otherwise.
    static ArtifactId from_hex(std::string_view hex);

    /// SHA-1 of the given text; used for extrinsic origin identifiers.
    static ArtifactId sha1_of(std::string_view text);

    std::size_t width() const { return width_; }
    bool empty() const { return width_ == 0; }
    std::span<const std::uint8_t> bytes() const { return {bytes_.data(), width_}; }

    /// Lowercase hex, 2 * width() characters.
    std::string hex() const;

    friend bool operator==(const ArtifactId&, const ArtifactId&) = default;
    friend std::strong_ordering operator<=>(const ArtifactId& a, const ArtifactId& b);

  private:
    std::array<std::uint8_t, kMaxWidth> bytes_{};
    std::uint8_t width_ = 0;
};

/// True for strings of exactly 40 or 64 hex digits.
bool looks_like_hex_id(std::string_view text);

}  // namespace forkscope

template <>
struct std::hash<forkscope::ArtifactId> {
    std::size_t operator()(const forkscope::ArtifactId& id) const noexcept {
        // Ids are hash outputs already; the leading bytes are well mixed.
        std::size_t h = id.width();
        auto b = id.bytes();
        for (std::size_t i = 0; i < b.size() && i < sizeof(std::size_t); ++i)
            h = (h << 8) ^ b[i];
        return h;
    }
};
