#include "lcot/json_out.hpp"

#include <cmath>
#include <cstdio>

#include "lcot/error.hpp"

namespace lcot {

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!stack_.empty() && has_items_.back()) out_ += ',';
  if (!has_items_.empty()) has_items_.back() = true;
}

void JsonWriter::raw(std::string_view s) {
  separate();
  out_ += s;
}

JsonWriter& JsonWriter::begin_object() {
  raw("{");
  stack_.push_back('{');
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  stack_.pop_back();
  has_items_.pop_back();
  out_ += '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  raw("[");
  stack_.push_back('[');
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  stack_.pop_back();
  has_items_.pop_back();
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  if (!stack_.empty() && has_items_.back()) out_ += ',';
  if (!has_items_.empty()) has_items_.back() = true;
  out_ += '"';
  out_ += json_escape(k);
  out_ += "\":";
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
  separate();
  out_ += '"';
  out_ += json_escape(s);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(double d) {
  if (!std::isfinite(d)) throw validation_error("json: cannot serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  raw(buf);
  return *this;
}

JsonWriter& JsonWriter::value(long long i) {
  raw(std::to_string(i));
  return *this;
}

JsonWriter& JsonWriter::value(bool b) {
  raw(b ? "true" : "false");
  return *this;
}

}  // namespace lcot
