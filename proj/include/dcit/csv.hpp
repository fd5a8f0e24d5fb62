#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dcit::csv {

// Split one CSV line. Handles double-quoted fields with "" escapes; no
// multi-line records (none of our schemas produce them).
std::vector<std::string> split_line(const std::string& line);

// Read all non-empty lines of a file. Throws Error if the file cannot be
// opened. Strips a trailing '\r' so CRLF input parses the same as LF.
std::vector<std::string> read_lines(const std::string& path);

// Quote a field only when it contains a comma, quote or newline.
std::string quote(const std::string& field);

// Deterministic number formatting ("%.12g"): identical input bits yield
// identical text on every run, which the pipeline's byte-identical output
// guarantee relies on.
std::string fmt(double v);
std::string fmt(int v);
std::string fmt(std::int64_t v);

// Strict numeric parses: the whole token must be consumed.
double parse_double(const std::string& tok, bool* ok);
int parse_int(const std::string& tok, bool* ok);

// FNV-1a 64-bit over a byte string, as a 16-char lowercase hex string.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace dcit::csv
