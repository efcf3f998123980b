#include "fdia/kernels.hpp"

#include <omp.h>

#include <stdexcept>

namespace fdia::kernels {

using type_a::Point;

Bytes h2_input(ByteView prefix, std::uint32_t index) {
  ByteWriter w;
  w.raw(prefix);
  w.u32(index);
  return std::move(w).bytes();
}

namespace {

G1Element tag_one(const G1Element& s, const Scalar& r, ByteView prefix, const Scalar& f, std::uint32_t i) {
  return s.pow(f) * hash_to_g1(HashDomain::H2, h2_input(prefix, i)).pow(r);
}

FreshTerm fresh_one(std::span<const G1Element> tags, std::span<const Scalar> blocks, std::uint32_t i,
                    const Scalar& k_prf) {
  Scalar c = prf_eval(k_prf, i);
  return {i, tags[i - 1].pow(c), c * blocks[i - 1]};
}

void check_indices(std::span<const std::uint32_t> indices, std::size_t m) {
  for (auto i : indices) {
    if (i < 1 || i > m) throw std::out_of_range("block index outside [1, m]");
  }
}

}  // namespace

std::vector<G1Element> tag_blocks(const G1Element& s, const Scalar& r, ByteView prefix,
                                  std::span<const Scalar> blocks, Exec exec) {
  const auto n = static_cast<std::int64_t>(blocks.size());
  std::vector<G1Element> tags(blocks.size());
  if (exec == Exec::serial) {
    for (std::int64_t i = 0; i < n; ++i) {
      tags[i] = tag_one(s, r, prefix, blocks[i], static_cast<std::uint32_t>(i + 1));
    }
    return tags;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    tags[i] = tag_one(s, r, prefix, blocks[i], static_cast<std::uint32_t>(i + 1));
  }
  return tags;
}

std::vector<FreshTerm> fresh_terms(std::span<const G1Element> tags, std::span<const Scalar> blocks,
                                   std::span<const std::uint32_t> indices, const Scalar& k_prf,
                                   Exec exec) {
  if (tags.size() != blocks.size()) throw std::invalid_argument("tag and block counts differ");
  check_indices(indices, tags.size());
  const auto n = static_cast<std::int64_t>(indices.size());
  std::vector<FreshTerm> out(indices.size());
  if (exec == Exec::serial) {
    for (std::int64_t j = 0; j < n; ++j) out[j] = fresh_one(tags, blocks, indices[j], k_prf);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t j = 0; j < n; ++j) out[j] = fresh_one(tags, blocks, indices[j], k_prf);
  return out;
}

G1Element hashed_term_product(ByteView prefix, std::span<const std::pair<std::uint32_t, Scalar>> terms,
                              Exec exec) {
  const auto n = static_cast<std::int64_t>(terms.size());
  if (exec == Exec::serial) {
    G1Element acc;
    for (const auto& [i, c] : terms) acc *= hash_to_g1(HashDomain::H2, h2_input(prefix, i)).pow(c);
    return acc;
  }
  Point acc = Point::infinity();
#pragma omp parallel
  {
    Point local = Point::infinity();
#pragma omp for schedule(dynamic, 4) nowait
    for (std::int64_t j = 0; j < n; ++j) {
      const auto& [i, c] = terms[j];
      Point raw = hash_to_curve_raw(HashDomain::H2, h2_input(prefix, i));
      local = local + type_a::scalar_mul(raw, c.to_int());
    }
#pragma omp critical
    acc = acc + local;
  }
  return G1Element::from_point_unchecked(type_a::clear_cofactor(acc));
}

}  // namespace fdia::kernels
