#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "trajsfm/util/errors.h"

namespace trajsfm {

// Little-endian serialization of trivially copyable scalars, independent of
// the host byte order.
template <typename T>
void WriteLittleEndian(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
  }
  out.write(bytes.data(), sizeof(T));
}

template <typename T>
T ReadLittleEndian(std::istream& in, const std::string& what) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes;
  in.read(bytes.data(), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw LengthError("unexpected end of file while reading " + what);
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

// Reads exactly `count` raw bytes or throws LengthError.
inline std::string ReadBytes(std::istream& in, size_t count,
                             const std::string& what) {
  std::string bytes(count, '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(count));
  if (in.gcount() != static_cast<std::streamsize>(count)) {
    throw LengthError("unexpected end of file while reading " + what);
  }
  return bytes;
}

}  // namespace trajsfm
