#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace mrubis::comparch {

/// Opaque identifier of an architectural element. Zero is never assigned.
struct Uid {
    std::uint64_t value = 0;

    constexpr Uid() = default;
    constexpr explicit Uid(std::uint64_t v) : value(v) {}

    [[nodiscard]] constexpr bool valid() const { return value != 0; }

    friend constexpr auto operator<=>(const Uid&, const Uid&) = default;
};

/// Annotations draw from their own range so that engine bookkeeping never
/// shifts the uids of architectural elements.
inline constexpr std::uint64_t kAnnotationUidBase = std::uint64_t{1} << 62;

inline std::ostream& operator<<(std::ostream& os, Uid uid) { return os << uid.value; }

}  // namespace mrubis::comparch

template <>
struct std::hash<mrubis::comparch::Uid> {
    std::size_t operator()(mrubis::comparch::Uid uid) const noexcept {
        return std::hash<std::uint64_t>{}(uid.value);
    }
};
