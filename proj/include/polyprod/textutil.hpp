#pragma once

/** Tiny text helpers shared by the parsers (carrier specs, programs, files). */

#include <cstdint>
#include <string>
#include <vector>

namespace polyprod::text {

std::string trim(const std::string& s);

/// Split on `sep` at bracket depth 0 (rounds and squares nest), trimming parts.
std::vector<std::string> split(const std::string& s, char sep);

/// Strict signed integer parse; throws ParseError on trailing garbage.
std::int64_t parse_i64(const std::string& text);

}  // namespace polyprod::text
