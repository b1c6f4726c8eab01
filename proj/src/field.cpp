#include "gencoupon/field.hpp"

#include <string>

#include "gencoupon/errors.hpp"

namespace gencoupon {

namespace {

std::shared_ptr<const detail::FieldTables> build_gf256_tables() {
  auto t = std::make_shared<detail::FieldTables>();
  t->log = std::make_unique<std::uint8_t[]>(256);
  t->exp = std::make_unique<std::uint8_t[]>(510);
  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < 255; ++i) {
    t->exp[i] = static_cast<std::uint8_t>(x);
    t->exp[i + 255] = static_cast<std::uint8_t>(x);
    t->log[x] = static_cast<std::uint8_t>(i);
    x <<= 1;
    if (x & 0x100) x ^= kGf256Reduction;
  }
  t->log[0] = 0;

  t->product = std::make_unique<Symbol[]>(256 * 256);
  for (std::uint32_t a = 1; a < 256; ++a)
    for (std::uint32_t b = 1; b < 256; ++b)
      t->product[(a << 8) | b] = t->exp[std::uint32_t{t->log[a]} + t->log[b]];
  for (std::uint32_t a = 0; a < 256; ++a) {
    t->product[a << 8] = 0;
    t->product[a] = 0;
  }

  t->inverse = std::make_unique<Symbol[]>(256);
  t->inverse[0] = 0;
  for (std::uint32_t a = 1; a < 256; ++a) t->inverse[a] = t->exp[(255 - t->log[a]) % 255];
  return t;
}

std::shared_ptr<const detail::FieldTables> build_prime_tables(std::uint32_t q) {
  auto t = std::make_shared<detail::FieldTables>();
  t->inverse = std::make_unique<Symbol[]>(q);
  t->inverse[0] = 0;
  if (q > 1) t->inverse[1] = 1;
  // inv(a) = -(q / a) * inv(q mod a)
  for (std::uint32_t a = 2; a < q; ++a) {
    const std::uint64_t r = t->inverse[q % a];
    t->inverse[a] = static_cast<Symbol>((q - (q / a) * r % q) % q);
  }
  return t;
}

void require_member(FieldElement a, const Field& field) {
  if (!field.contains(a))
    throw ContractError("element of GF(" + std::to_string(a.order()) + ") value " +
                        std::to_string(a.value()) + " used with GF(" + std::to_string(field.order()) +
                        ")");
}

}  // namespace

bool is_prime(std::uint32_t q) noexcept {
  if (q < 2) return false;
  for (std::uint32_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

Field Field::prime(std::uint32_t q) {
  if (!is_prime(q) || q > kMaxPrimeOrder)
    throw ConfigError("unsupported field order " + std::to_string(q) +
                      ": expected a prime <= 65521 or 256");
  return Field(q, FieldKind::prime, build_prime_tables(q));
}

Field Field::gf256() {
  static const std::shared_ptr<const Tables> tables = build_gf256_tables();
  return Field(256, FieldKind::binary_extension, tables);
}

Field Field::of_order(std::uint32_t q) { return q == 256 ? gf256() : prime(q); }

FieldElement Field::element(std::uint32_t value) const {
  if (value >= order_)
    throw ContractError("value " + std::to_string(value) + " is not in GF(" + std::to_string(order_) +
                        ")");
  return {static_cast<Symbol>(value), order_};
}

void Field::axpy(std::span<Symbol> dst, Symbol c, std::span<const Symbol> src) const noexcept {
  if (c == 0) return;
  const std::size_t len = dst.size();
  if (kind_ == FieldKind::binary_extension) {
    const Symbol* row = tables_->product.get() + (std::size_t{c} << 8);
    for (std::size_t i = 0; i < len; ++i) dst[i] ^= row[src[i]];
    return;
  }
  const std::uint32_t q = order_;
  for (std::size_t i = 0; i < len; ++i)
    dst[i] = static_cast<Symbol>((dst[i] + std::uint32_t{c} * src[i]) % q);
}

void Field::scale(std::span<Symbol> v, Symbol c) const noexcept {
  for (auto& x : v) x = mul(x, c);
}

FieldElement add(FieldElement a, FieldElement b, const Field& field) {
  require_member(a, field);
  require_member(b, field);
  return {field.add(a.value(), b.value()), field.order()};
}

FieldElement sub(FieldElement a, FieldElement b, const Field& field) {
  require_member(a, field);
  require_member(b, field);
  return {field.sub(a.value(), b.value()), field.order()};
}

FieldElement mul(FieldElement a, FieldElement b, const Field& field) {
  require_member(a, field);
  require_member(b, field);
  return {field.mul(a.value(), b.value()), field.order()};
}

FieldElement inv(FieldElement a, const Field& field) {
  require_member(a, field);
  if (a.value() == 0) throw DivisionByZeroError("inverse of zero in GF(" + std::to_string(field.order()) + ")");
  return {field.inv(a.value()), field.order()};
}

FieldElement random_element(Rng& rng, const Field& field) {
  return {field.random_symbol(rng), field.order()};
}

}  // namespace gencoupon
