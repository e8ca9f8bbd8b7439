#include "lapnet/json_out.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace lapnet {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void emit(std::ostringstream& os, const nlohmann::json& v, int depth) {
  auto indent = [&](int d) { os << std::string(static_cast<std::size_t>(2 * d), ' '); };
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map keeps keys sorted
        if (!first) os << ",\n";
        first = false;
        indent(depth + 1);
        os << nlohmann::json(it.key()).dump() << ": ";
        emit(os, it.value(), depth + 1);
      }
      os << "\n";
      indent(depth);
      os << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : v) flat = flat && !e.is_structured();
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) os << ", ";
          emit(os, v[i], depth);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",\n";
        indent(depth + 1);
        emit(os, v[i], depth + 1);
      }
      os << "\n";
      indent(depth);
      os << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      double x = v.get<double>();
      if (std::isfinite(x)) {
        os << format_double(x);
      } else {
        os << nlohmann::json(format_double(x)).dump();  // JSON has no inf/nan literal
      }
      return;
    }
    default:
      os << v.dump();
  }
}

}  // namespace

std::string to_deterministic_json(const nlohmann::json& value) {
  std::ostringstream os;
  emit(os, value, 0);
  os << "\n";
  return os.str();
}

}  // namespace lapnet
