#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ccalign {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

std::string_view trim(std::string_view s) noexcept;

/// Number of whitespace-delimited tokens.
std::size_t count_tokens(std::string_view s) noexcept;

std::vector<std::string_view> split(std::string_view s, char sep);

std::string ascii_lower(std::string_view s);

/// Splits UTF-8 into code points (each returned as its byte sequence).
/// Invalid bytes are returned as single-byte units.
std::vector<std::string_view> utf8_units(std::string_view s);

/// Reads every line of a file; throws Error(io) if it cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path &path);

std::string read_file(const std::filesystem::path &path);

/// Writes `content` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into index-addressed slots.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn);

}  // namespace ccalign
