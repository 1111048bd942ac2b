#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

// Little-endian primitive encoding for the on-disk formats (corpus cache,
// PLSA snapshot, EMB1). Independent of host byte order.
namespace topicmine::binio {

void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_f32(std::ostream& os, float v);
void write_f64(std::ostream& os, double v);
void write_string(std::ostream& os, std::string_view s);
void write_magic(std::ostream& os, std::string_view magic);

// Readers throw DataError("truncated <what>") on short reads.
std::uint32_t read_u32(std::istream& is, std::string_view what);
std::uint64_t read_u64(std::istream& is, std::string_view what);
float read_f32(std::istream& is, std::string_view what);
double read_f64(std::istream& is, std::string_view what);
std::string read_string(std::istream& is, std::string_view what);
// Throws DataError naming the expected magic when it does not match.
void expect_magic(std::istream& is, std::string_view magic);

}  // namespace topicmine::binio
