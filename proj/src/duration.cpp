#include "netbench/duration.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace netbench {

Duration parse_duration(const std::string& text) {
  if (text == "inf" || text == "infinite" || text == "infinity") {
    return Duration::infinite();
  }
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid duration: '" + text + "'");
  }
  std::string unit = text.substr(pos);
  while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.front()))) {
    unit.erase(unit.begin());
  }
  double scale = 0.0;
  if (unit == "ns") {
    scale = 1.0;
  } else if (unit == "us") {
    scale = 1e3;
  } else if (unit == "ms") {
    scale = 1e6;
  } else if (unit == "s") {
    scale = 1e9;
  } else {
    throw std::invalid_argument("duration '" + text + "' needs a unit (ns, us, ms, s) or 'inf'");
  }
  if (value < 0.0) {
    throw std::invalid_argument("negative duration: '" + text + "'");
  }
  return Duration::nanoseconds(static_cast<std::int64_t>(std::llround(value * scale)));
}

std::string format_duration(Duration d) {
  if (d.is_infinite()) return "inf";
  const std::int64_t ns = d.count_ns();
  char buf[40];
  if (ns % 1000000000 == 0) {
    std::snprintf(buf, sizeof(buf), "%llds", static_cast<long long>(ns / 1000000000));
  } else if (ns % 1000000 == 0) {
    std::snprintf(buf, sizeof(buf), "%lldms", static_cast<long long>(ns / 1000000));
  } else if (ns % 1000 == 0) {
    std::snprintf(buf, sizeof(buf), "%lldus", static_cast<long long>(ns / 1000));
  } else {
    std::snprintf(buf, sizeof(buf), "%lldns", static_cast<long long>(ns));
  }
  return buf;
}

double decay_ratio(Duration t, Duration T) {
  if (T.is_infinite()) return 0.0;
  if (t.is_infinite()) return std::numeric_limits<double>::infinity();
  return t.seconds() / T.seconds();
}

}  // namespace netbench
