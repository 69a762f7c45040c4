#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "detuf/graph.hpp"

namespace detuf {

// Edge-list text format:
//
//   # comment lines start with '#', blank lines are ignored
//   <n> <m>
//   <u> <v> [w]      (m lines, 0-based ids, optional non-negative weight)
//
// Weights are written in shortest round-trip form, so parse(write(s)) == s.

EdgeSequence parse_edge_list(std::istream& in, std::string_view source = "<stream>");
EdgeSequence parse_edge_file(const std::filesystem::path& path);

/// `header` lines are emitted as '#' comments before the data.
void write_edge_list(const EdgeSequence& seq, std::ostream& out, std::string_view header = {});
void write_edge_file(const EdgeSequence& seq, const std::filesystem::path& path,
                     std::string_view header = {});

/// Shortest decimal form that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace detuf
