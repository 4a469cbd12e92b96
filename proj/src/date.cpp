#include <revnet/date.hpp>

#include <charconv>
#include <chrono>
#include <stdexcept>

#include <fmt/format.h>

namespace revnet {

namespace {

template <typename T>
bool parse_digits(std::string_view s, T& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

date date::from_ymd(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day ymd{std::chrono::year(year), std::chrono::month(month),
                                  std::chrono::day(day)};
  if (!ymd.ok()) throw std::invalid_argument(fmt::format("invalid date {}-{}-{}", year, month, day));
  return date(static_cast<std::int32_t>(std::chrono::sys_days(ymd).time_since_epoch().count()));
}

date date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
    throw std::invalid_argument(fmt::format("malformed date '{}'", iso));
  int y = 0;
  unsigned m = 0, d = 0;
  if (!parse_digits(iso.substr(0, 4), y) || !parse_digits(iso.substr(5, 2), m) ||
      !parse_digits(iso.substr(8, 2), d))
    throw std::invalid_argument(fmt::format("malformed date '{}'", iso));
  return from_ymd(y, m, d);
}

int date::year() const {
  std::chrono::year_month_day ymd{std::chrono::sys_days(std::chrono::days(days_))};
  return static_cast<int>(ymd.year());
}

std::string date::iso() const {
  std::chrono::year_month_day ymd{std::chrono::sys_days(std::chrono::days(days_))};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

}  // namespace revnet
