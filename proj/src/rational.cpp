#include "xtpn/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace xtpn {

namespace {

using i128 = __int128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

std::int64_t narrow(i128 v) {
  if (v > i128(kMax) || v < -i128(kMax)) {
    throw std::overflow_error("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

}  // namespace

Rat::Rat(std::int64_t units) : num_(units), den_(1) {
  if (units < 0) throw std::domain_error("time value must be non-negative");
}

Rat::Rat(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (num < 0 || den < 0) throw std::domain_error("time value must be non-negative");
  const std::int64_t g = num == 0 ? den : std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
  if (num_ == 0) den_ = 1;
}

Rat Rat::infinity() {
  Rat r;
  r.num_ = 1;
  r.den_ = 0;
  return r;
}

std::optional<Rat> Rat::parse(std::string_view text) {
  if (text == "inf") return infinity();
  if (text.empty()) return std::nullopt;
  const auto split = text.find('/');
  const auto read = [](std::string_view part) -> std::optional<std::int64_t> {
    if (part.empty() || part.size() > 19) return std::nullopt;
    if (part[0] < '0' || part[0] > '9') return std::nullopt;
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || ptr != part.data() + part.size()) return std::nullopt;
    return value;
  };
  const auto num = read(split == std::string_view::npos ? text : text.substr(0, split));
  if (!num) return std::nullopt;
  std::int64_t den = 1;
  if (split != std::string_view::npos) {
    const auto d = read(text.substr(split + 1));
    if (!d || *d == 0) return std::nullopt;
    den = *d;
  }
  return Rat(*num, den);
}

Rat Rat::operator+(const Rat& rhs) const {
  if (is_infinite() || rhs.is_infinite()) return infinity();
  const i128 n = i128(num_) * rhs.den_ + i128(rhs.num_) * den_;
  const i128 d = i128(den_) * rhs.den_;
  const i128 g = gcd128(n, d);
  Rat out;
  out.num_ = narrow(n / g);
  out.den_ = narrow(d / g);
  return out;
}

Rat Rat::operator-(const Rat& rhs) const {
  if (rhs.is_infinite()) throw std::domain_error("cannot subtract infinity");
  if (is_infinite()) return infinity();
  const i128 n = i128(num_) * rhs.den_ - i128(rhs.num_) * den_;
  if (n < 0) throw std::domain_error("negative time difference");
  const i128 d = i128(den_) * rhs.den_;
  const i128 g = gcd128(n, d);
  Rat out;
  out.num_ = narrow(n / g);
  out.den_ = n == 0 ? 1 : narrow(d / g);
  return out;
}

Rat Rat::scaled(std::int64_t k) const {
  if (k < 0) throw std::domain_error("negative scale");
  if (is_infinite()) return infinity();
  const i128 n = i128(num_) * k;
  const i128 g = gcd128(n, den_);
  Rat out;
  out.num_ = narrow(n / g);
  out.den_ = n == 0 ? 1 : narrow(den_ / g);
  return out;
}

std::int64_t Rat::floor_scaled(std::int64_t scale) const {
  if (is_infinite()) throw std::domain_error("floor of infinity");
  return narrow(i128(num_) * scale / den_);
}

bool Rat::is_multiple_of(const Rat& unit) const {
  if (is_infinite()) return false;
  if (unit.is_infinite() || unit.is_zero()) throw std::domain_error("bad divisibility unit");
  return (i128(num_) * unit.den_) % (i128(den_) * unit.num_) == 0;
}

std::strong_ordering Rat::operator<=>(const Rat& rhs) const {
  if (is_infinite() && rhs.is_infinite()) return std::strong_ordering::equal;
  if (is_infinite()) return std::strong_ordering::greater;
  if (rhs.is_infinite()) return std::strong_ordering::less;
  const i128 lhs_cross = i128(num_) * rhs.den_;
  const i128 rhs_cross = i128(rhs.num_) * den_;
  if (lhs_cross < rhs_cross) return std::strong_ordering::less;
  if (lhs_cross > rhs_cross) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rat::str() const {
  if (is_infinite()) return "inf";
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace xtpn
