#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace revnet {

/// Calendar date at day resolution, stored as days since 1970-01-01.
class date {
 public:
  constexpr date() = default;
  constexpr explicit date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

  static date from_ymd(int year, unsigned month, unsigned day);

  /// Parses `YYYY-MM-DD`; throws std::invalid_argument on malformed or impossible dates.
  static date parse(std::string_view iso);

  static constexpr date max() { return date(std::numeric_limits<std::int32_t>::max()); }
  static constexpr date min() { return date(std::numeric_limits<std::int32_t>::min()); }

  constexpr std::int32_t days() const { return days_; }
  int year() const;
  std::string iso() const;

  constexpr date operator+(std::int32_t d) const { return date(days_ + d); }
  constexpr std::int32_t operator-(date other) const { return days_ - other.days_; }
  constexpr auto operator<=>(const date&) const = default;

 private:
  std::int32_t days_ = 0;
};

}  // namespace revnet
