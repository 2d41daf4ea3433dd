#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace salza {

using ByteString = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Raised for every contract violation in the library. The message is a
/// single line suitable for a CLI diagnostic.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(std::string_view)>;

namespace detail {
inline WarningHandler& warningHandler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}
}  // namespace detail

/// Replaces the sink for non-fatal diagnostics and returns the previous one.
inline WarningHandler setWarningHandler(WarningHandler handler) {
  auto previous = std::move(detail::warningHandler());
  detail::warningHandler() = std::move(handler);
  return previous;
}

inline void warn(std::string_view message) {
  if (detail::warningHandler()) detail::warningHandler()(message);
}

inline ByteString toBytes(std::string_view text) {
  return ByteString(text.begin(), text.end());
}

inline ByteView view(const ByteString& bytes) { return {bytes.data(), bytes.size()}; }

/// Set of distinct octet values, as a presence table.
class Alphabet {
 public:
  Alphabet() { present_.fill(false); }
  explicit Alphabet(ByteView bytes) : Alphabet() { add(bytes); }

  void add(ByteView bytes) {
    for (auto b : bytes) {
      if (!present_[b]) {
        present_[b] = true;
        ++size_;
      }
    }
  }
  bool contains(std::uint8_t b) const { return present_[b]; }
  std::size_t size() const { return size_; }

 private:
  std::array<bool, 256> present_{};
  std::size_t size_ = 0;
};

inline ByteString readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  ByteString data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("cannot read file: " + path);
  return data;
}

inline void writeFile(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("cannot write file: " + path);
}

}  // namespace salza
