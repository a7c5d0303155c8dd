#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace xtpn {

// Exact non-negative rational time with a distinguished +infinity.
// Finite values are kept in lowest terms with a positive denominator;
// infinity is encoded as 1/0 and compares greater than every finite value.
// All arithmetic is checked: intermediate products run in 128 bits and
// anything that leaves the int64 range throws std::overflow_error.
class Rat {
 public:
  constexpr Rat() = default;
  Rat(std::int64_t units);  // NOLINT: implicit whole units are convenient
  Rat(std::int64_t num, std::int64_t den);

  static Rat infinity();

  // Accepts "inf", "<digits>" or "<digits>/<digits>"; rejects signs,
  // whitespace, zero denominators and out-of-range literals.
  static std::optional<Rat> parse(std::string_view text);

  bool is_infinite() const { return den_ == 0; }
  bool is_zero() const { return num_ == 0 && den_ == 1; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rat operator+(const Rat& rhs) const;
  // Requires lhs >= rhs and a finite rhs; time never runs backwards.
  Rat operator-(const Rat& rhs) const;
  Rat& operator+=(const Rat& rhs) { return *this = *this + rhs; }

  // this * k for a non-negative integer factor.
  Rat scaled(std::int64_t k) const;

  // floor(this * scale); finite values only.
  std::int64_t floor_scaled(std::int64_t scale) const;

  // True iff this is an exact integer multiple of unit (unit finite, > 0).
  bool is_multiple_of(const Rat& unit) const;

  bool operator==(const Rat&) const = default;
  std::strong_ordering operator<=>(const Rat& rhs) const;

  std::string str() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace xtpn
