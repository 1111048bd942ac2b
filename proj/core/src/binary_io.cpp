#include "topicmine/binary_io.hpp"

#include <array>
#include <bit>

#include "topicmine/error.hpp"

namespace topicmine::binio {
namespace {

template <typename U>
void put_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> buf;
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf.data(), buf.size());
}

template <typename U>
U get_le(std::istream& is, std::string_view what) {
  std::array<unsigned char, sizeof(U)> buf;
  if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size()))
    throw DataError("truncated " + std::string(what));
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void write_u32(std::ostream& os, std::uint32_t v) { put_le(os, v); }
void write_u64(std::ostream& os, std::uint64_t v) { put_le(os, v); }
void write_f32(std::ostream& os, float v) { put_le(os, std::bit_cast<std::uint32_t>(v)); }
void write_f64(std::ostream& os, double v) { put_le(os, std::bit_cast<std::uint64_t>(v)); }

void write_string(std::ostream& os, std::string_view s) {
  write_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_magic(std::ostream& os, std::string_view magic) {
  os.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

std::uint32_t read_u32(std::istream& is, std::string_view what) { return get_le<std::uint32_t>(is, what); }
std::uint64_t read_u64(std::istream& is, std::string_view what) { return get_le<std::uint64_t>(is, what); }
float read_f32(std::istream& is, std::string_view what) {
  return std::bit_cast<float>(get_le<std::uint32_t>(is, what));
}
double read_f64(std::istream& is, std::string_view what) {
  return std::bit_cast<double>(get_le<std::uint64_t>(is, what));
}

std::string read_string(std::istream& is, std::string_view what) {
  const auto n = read_u64(is, what);
  if (n > (std::uint64_t{1} << 32)) throw DataError("implausible length for " + std::string(what));
  std::string s(n, '\0');
  if (n > 0 && !is.read(s.data(), static_cast<std::streamsize>(n)))
    throw DataError("truncated " + std::string(what));
  return s;
}

void expect_magic(std::istream& is, std::string_view magic) {
  std::string got(magic.size(), '\0');
  if (!is.read(got.data(), static_cast<std::streamsize>(got.size())) || got != magic)
    throw DataError("bad magic: expected \"" + std::string(magic) + "\"");
}

}  // namespace topicmine::binio
