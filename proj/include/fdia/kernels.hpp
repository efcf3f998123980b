#pragma once

// The data-parallel loops of the protocol. Every kernel has a serial
// reference and an OpenMP version; both return identical group elements.
//
// Block indices are 1-based. The H2 input for block i is `prefix || u32(i)`,
// where the prefix binds the file name and h''.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fdia/group.hpp"

namespace fdia::kernels {

enum class Exec { serial, parallel };

Bytes h2_input(ByteView prefix, std::uint32_t index);

// t_i = s^{f_i} * H2(prefix || i)^r for i = 1..blocks.size()
std::vector<G1Element> tag_blocks(const G1Element& s, const Scalar& r, ByteView prefix,
                                  std::span<const Scalar> blocks, Exec exec = Exec::parallel);

struct FreshTerm {
  std::uint32_t index = 0;
  G1Element phi;  // t_i^{c_i}
  Scalar mu;      // c_i * f_i
};

// c_i = PRF(k_prf, i) for each requested index. One G1 exponentiation per index.
std::vector<FreshTerm> fresh_terms(std::span<const G1Element> tags, std::span<const Scalar> blocks,
                                   std::span<const std::uint32_t> indices, const Scalar& k_prf,
                                   Exec exec = Exec::parallel);

// prod_i H2(prefix || i)^{c_i}. The parallel version multiplies the uncleared
// curve candidates and clears the cofactor once on the product.
G1Element hashed_term_product(ByteView prefix, std::span<const std::pair<std::uint32_t, Scalar>> terms,
                              Exec exec = Exec::parallel);

}  // namespace fdia::kernels
