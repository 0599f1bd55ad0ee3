#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lcot {

/// Streaming JSON emitter with a fixed, caller-controlled key order and
/// doubles printed with 17 significant digits, so identical data serializes
/// to identical bytes.
class JsonWriter {
 public:
  std::string take() { return std::move(out_); }
  const std::string& str() const { return out_; }

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(double d);
  JsonWriter& value(long long i);
  JsonWriter& value(std::size_t i) { return value(static_cast<long long>(i)); }
  JsonWriter& value(int i) { return value(static_cast<long long>(i)); }
  JsonWriter& value(bool b);

 private:
  void separate();
  void raw(std::string_view s);

  std::string out_;
  std::vector<char> stack_;        // '{' or '['
  std::vector<bool> has_items_;
  bool after_key_ = false;
};

std::string json_escape(std::string_view s);

}  // namespace lcot
