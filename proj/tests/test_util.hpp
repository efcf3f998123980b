#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "fdia/bytes.hpp"

namespace fdia::testing {

inline std::string hex(std::span<const std::uint8_t> b) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  for (auto c : b) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

inline Bytes unhex(const std::string& s) {
  Bytes out;
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(s.substr(i, 2), nullptr, 16)));
  }
  return out;
}

}  // namespace fdia::testing
