#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "gencoupon/random.hpp"

namespace gencoupon {

/// Storage type of one GF(q) symbol. Wide enough for every supported order.
using Symbol = std::uint16_t;

enum class FieldKind { prime, binary_extension };

/// Reduction polynomial x^8 + x^4 + x^3 + x^2 + 1 used for GF(256).
inline constexpr std::uint32_t kGf256Reduction = 0x11D;

/// Largest prime order accepted (products must fit in 32 bits).
inline constexpr std::uint32_t kMaxPrimeOrder = 65521;

/// An element tagged with the order of the field it belongs to.
class FieldElement {
 public:
  constexpr FieldElement() = default;
  constexpr FieldElement(Symbol value, std::uint32_t order) : value_(value), order_(order) {}

  constexpr Symbol value() const noexcept { return value_; }
  constexpr std::uint32_t order() const noexcept { return order_; }

  friend constexpr bool operator==(FieldElement, FieldElement) = default;

 private:
  Symbol value_ = 0;
  std::uint32_t order_ = 0;
};

namespace detail {

struct FieldTables {
  // GF(256): log/exp tables and the 256x256 product table derived from them.
  std::unique_ptr<std::uint8_t[]> log;
  std::unique_ptr<std::uint8_t[]> exp;
  std::unique_ptr<Symbol[]> product;
  std::unique_ptr<Symbol[]> inverse;
};

}  // namespace detail

/// GF(q) for prime q <= 65521, or GF(2^8) with reduction polynomial 0x11D.
///
/// Copies share one immutable set of lookup tables, so a field can be passed
/// by value and used from many threads at once. The raw `Symbol` members skip
/// validation and are meant for inner loops; the `FieldElement` free functions
/// below check their operands.
class Field {
 public:
  /// Prime field; throws ConfigError when q is not a supported prime.
  static Field prime(std::uint32_t q);
  static Field gf256();
  /// Dispatches on q: 256 gives the binary extension, anything else must be prime.
  static Field of_order(std::uint32_t q);

  std::uint32_t order() const noexcept { return order_; }
  FieldKind kind() const noexcept { return kind_; }
  /// Reduction polynomial as a bit mask; 0 for prime fields.
  std::uint32_t reduction() const noexcept {
    return kind_ == FieldKind::binary_extension ? kGf256Reduction : 0;
  }

  /// Validated element; throws ContractError when value >= q.
  FieldElement element(std::uint32_t value) const;
  FieldElement zero() const noexcept { return {0, order_}; }
  FieldElement one() const noexcept { return {1, order_}; }
  bool contains(FieldElement a) const noexcept { return a.order() == order_ && a.value() < order_; }

  Symbol add(Symbol a, Symbol b) const noexcept {
    if (kind_ == FieldKind::binary_extension) return static_cast<Symbol>(a ^ b);
    const std::uint32_t s = std::uint32_t{a} + b;
    return static_cast<Symbol>(s >= order_ ? s - order_ : s);
  }
  Symbol neg(Symbol a) const noexcept {
    if (kind_ == FieldKind::binary_extension || a == 0) return a;
    return static_cast<Symbol>(order_ - a);
  }
  Symbol sub(Symbol a, Symbol b) const noexcept { return add(a, neg(b)); }
  Symbol mul(Symbol a, Symbol b) const noexcept {
    if (kind_ == FieldKind::binary_extension) return tables_->product[(std::size_t{a} << 8) | b];
    return static_cast<Symbol>((std::uint32_t{a} * b) % order_);
  }
  /// Multiplicative inverse; a must be nonzero.
  Symbol inv(Symbol a) const noexcept { return tables_->inverse[a]; }

  /// dst += c * src, element-wise.
  void axpy(std::span<Symbol> dst, Symbol c, std::span<const Symbol> src) const noexcept;
  /// v *= c, element-wise.
  void scale(std::span<Symbol> v, Symbol c) const noexcept;

  /// Uniform symbol in [0, q).
  Symbol random_symbol(Rng& rng) const { return static_cast<Symbol>(uniform_below(rng, order_)); }

  friend bool operator==(const Field& a, const Field& b) noexcept { return a.order_ == b.order_; }

 private:
  using Tables = detail::FieldTables;
  Field(std::uint32_t order, FieldKind kind, std::shared_ptr<const Tables> tables)
      : order_(order), kind_(kind), tables_(std::move(tables)) {}

  std::uint32_t order_;
  FieldKind kind_;
  std::shared_ptr<const Tables> tables_;
};

bool is_prime(std::uint32_t q) noexcept;

FieldElement add(FieldElement a, FieldElement b, const Field& field);
FieldElement sub(FieldElement a, FieldElement b, const Field& field);
FieldElement mul(FieldElement a, FieldElement b, const Field& field);
/// Throws DivisionByZeroError for a = 0.
FieldElement inv(FieldElement a, const Field& field);
FieldElement random_element(Rng& rng, const Field& field);

}  // namespace gencoupon
