#pragma once

#include <array>
#include <cstdint>

#include "fdia/bytes.hpp"

namespace fdia {

using Digest256 = std::array<std::uint8_t, 32>;
using Digest512 = std::array<std::uint8_t, 64>;

Digest256 sha256(ByteView data);
Digest512 sha512(ByteView data);
Digest512 hmac_sha512(ByteView key, ByteView data);

}  // namespace fdia
