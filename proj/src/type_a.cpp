#include "fdia/type_a.hpp"

#include <vector>

namespace fdia::type_a {

bool sqrt(const Fq& a, Fq& out) {
  Fq y = a.pow(kSqrtExponent);
  if (y.square() != a) return false;
  out = y;
  return true;
}

bool is_odd(const Fq& a) { return (a.to_int()[0] & 1) != 0; }

Fq2 operator*(const Fq2& a, const Fq2& b) {
  Fq v0 = a.c0 * b.c0;
  Fq v1 = a.c1 * b.c1;
  Fq cross = (a.c0 + a.c1) * (b.c0 + b.c1);
  return {v0 - v1, cross - v0 - v1};
}

Fq2 Fq2::square() const {
  Fq t = c0 * c1;
  return {(c0 + c1) * (c0 - c1), t.dbl()};
}

Fq2 Fq2::inverse() const {
  Fq inv = norm().inverse();
  return {c0 * inv, -(c1 * inv)};
}

Point Point::from_affine(const Affine& a) {
  if (a.infinity) return infinity();
  return {a.x, a.y, Fq::one()};
}

Affine Point::to_affine() const {
  if (is_infinity()) return {};
  Fq zinv = z.inverse();
  Fq zinv2 = zinv.square();
  return {x * zinv2, y * zinv2 * zinv, false};
}

bool Point::on_curve() const {
  if (is_infinity()) return true;
  Fq z2 = z.square();
  Fq z4 = z2.square();
  return y.square() == x.square() * x + x * z4;
}

Point Point::dbl() const {
  if (is_infinity() || y.is_zero()) return infinity();
  Fq xx = x.square();
  Fq yy = y.square();
  Fq zz = z.square();
  Fq s = (x * yy).dbl().dbl();
  Fq m = xx.dbl() + xx + zz.square();
  Fq x3 = m.square() - s.dbl();
  Fq yyyy8 = yy.square().dbl().dbl().dbl();
  Fq y3 = m * (s - x3) - yyyy8;
  Fq z3 = (y * z).dbl();
  return {x3, y3, z3};
}

Point operator+(const Point& a, const Point& b) {
  if (a.is_infinity()) return b;
  if (b.is_infinity()) return a;
  Fq z1z1 = a.z.square();
  Fq z2z2 = b.z.square();
  Fq u1 = a.x * z2z2;
  Fq u2 = b.x * z1z1;
  Fq s1 = a.y * z2z2 * b.z;
  Fq s2 = b.y * z1z1 * a.z;
  Fq h = u2 - u1;
  Fq r = s2 - s1;
  if (h.is_zero()) {
    if (r.is_zero()) return a.dbl();
    return Point::infinity();
  }
  Fq hh = h.square();
  Fq hhh = hh * h;
  Fq u1hh = u1 * hh;
  Fq x3 = r.square() - hhh - u1hh.dbl();
  Fq y3 = r * (u1hh - x3) - s1 * hhh;
  Fq z3 = a.z * b.z * h;
  return {x3, y3, z3};
}

bool operator==(const Point& a, const Point& b) {
  if (a.is_infinity() || b.is_infinity()) return a.is_infinity() && b.is_infinity();
  Fq z1z1 = a.z.square();
  Fq z2z2 = b.z.square();
  if (a.x * z2z2 != b.x * z1z1) return false;
  return a.y * z2z2 * b.z == b.y * z1z1 * a.z;
}

namespace {

constexpr int kWindow = 5;

// Width-w non-adjacent form, least significant digit first.
std::vector<int> wnaf(std::span<const std::uint64_t> scalar) {
  std::vector<std::uint64_t> n(scalar.begin(), scalar.end());
  n.push_back(0);
  auto is_zero = [&] {
    for (auto w : n) {
      if (w != 0) return false;
    }
    return true;
  };
  std::vector<int> digits;
  digits.reserve(64 * scalar.size() + 1);
  constexpr int kMod = 1 << kWindow;
  while (!is_zero()) {
    int d = 0;
    if ((n[0] & 1) != 0) {
      int low = static_cast<int>(n[0] & (kMod - 1));
      d = low >= kMod / 2 ? low - kMod : low;
      if (d > 0) {
        // n -= d
        std::uint64_t borrow = static_cast<std::uint64_t>(d);
        for (std::size_t i = 0; i < n.size() && borrow != 0; ++i) {
          std::uint64_t old = n[i];
          n[i] -= borrow;
          borrow = old < borrow ? 1 : 0;
        }
      } else {
        std::uint64_t carry = static_cast<std::uint64_t>(-d);
        for (std::size_t i = 0; i < n.size() && carry != 0; ++i) {
          n[i] += carry;
          carry = n[i] < carry ? 1 : 0;
        }
      }
    }
    digits.push_back(d);
    for (std::size_t i = 0; i + 1 < n.size(); ++i) n[i] = (n[i] >> 1) | (n[i + 1] << 63);
    n.back() >>= 1;
  }
  return digits;
}

}  // namespace

Point scalar_mul(const Point& p, std::span<const std::uint64_t> scalar) {
  if (p.is_infinity()) return p;
  std::vector<int> digits = wnaf(scalar);
  if (digits.empty()) return Point::infinity();

  constexpr int kTable = 1 << (kWindow - 2);
  Point table[kTable];
  table[0] = p;
  Point twice = p.dbl();
  for (int i = 1; i < kTable; ++i) table[i] = table[i - 1] + twice;

  Point acc = Point::infinity();
  for (std::size_t i = digits.size(); i-- > 0;) {
    acc = acc.dbl();
    int d = digits[i];
    if (d > 0) acc = acc + table[(d - 1) / 2];
    if (d < 0) acc = acc + table[(-d - 1) / 2].neg();
  }
  return acc;
}

Point clear_cofactor(const Point& p) { return scalar_mul(p, kCofactor); }

bool in_subgroup(const Point& p) {
  if (!p.on_curve()) return false;
  return scalar_mul(p, Fr::kModulus).is_infinity();
}

Fq2 miller_loop(const Affine& p, const Affine& q) {
  if (p.infinity || q.infinity) return Fq2::one();
  const Fq& xp = p.x;
  const Fq& yp = p.y;
  const Fq& xq = q.x;
  const Fq& yq = q.y;
  Fq xq_plus_xp = xq + xp;

  Point t = Point::from_affine(p);
  Fq2 f = Fq2::one();
  const auto& r = Fr::kModulus;
  for (std::size_t i = limbs::bit_length(r) - 1; i-- > 0;) {
    // Tangent at T evaluated at phi(Q) = (-xq, i*yq), scaled by 2*Y*Z^3.
    {
      Fq zz = t.z.square();
      Fq yy = t.y.square();
      Fq xx = t.x.square();
      Fq m = xx.dbl() + xx + zz.square();
      Fq2 line{m * (zz * xq + t.x) - yy.dbl(), (t.y * t.z * zz * yq).dbl()};
      f = f.square() * line;
      t = t.dbl();
    }
    if (limbs::bit(r, i)) {
      // Chord through T and P, scaled by V*Z.
      Fq zz = t.z.square();
      Fq u = yp * zz * t.z - t.y;
      Fq v = xp * zz - t.x;
      if (v.is_zero()) {
        // T = -P: the line is vertical and lies in F_q, so the final
        // exponentiation kills it.
        t = Point::infinity();
        continue;
      }
      Fq vz = v * t.z;
      Fq2 line{u * xq_plus_xp - vz * yp, vz * yq};
      f *= line;
      Fq vv = v.square();
      Fq vvv = vv * v;
      Fq xvv = t.x * vv;
      Fq x3 = u.square() - vvv - xvv.dbl();
      Fq y3 = u * (xvv - x3) - t.y * vvv;
      t = {x3, y3, vz};
    }
  }
  return f;
}

Fq2 final_exponentiation(const Fq2& f) {
  // f^(q-1) via Frobenius (conjugation), then the (q+1)/r part.
  Fq2 g = f.conj() * f.inverse();
  return g.pow(kCofactor);
}

Fq2 pairing(const Affine& p, const Affine& q) { return final_exponentiation(miller_loop(p, q)); }

Fq2 pairing_product(std::span<const std::pair<Affine, Affine>> pairs) {
  Fq2 f = Fq2::one();
  for (const auto& [p, q] : pairs) f *= miller_loop(p, q);
  return final_exponentiation(f);
}

}  // namespace fdia::type_a
