#include "detuf/edge_file.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "detuf/errors.hpp"

namespace detuf {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <class T>
bool parse_number(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf, ptr);
}

EdgeSequence parse_edge_list(std::istream& in, std::string_view source) {
  EdgeSequence seq;
  seq.provenance = std::string(source);
  bool have_header = false;
  std::size_t expected = 0;
  std::size_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;

    if (!have_header) {
      std::uint64_t n = 0;
      std::uint64_t m = 0;
      if (tokens.size() != 2 || !parse_number(tokens[0], n) || !parse_number(tokens[1], m)) {
        throw ParseError(line_no, "expected header '<n> <m>'");
      }
      if (n > std::numeric_limits<VertexId>::max()) throw ParseError(line_no, "n too large");
      seq.vertex_count = static_cast<std::size_t>(n);
      expected = static_cast<std::size_t>(m);
      seq.edges.reserve(expected);
      have_header = true;
      continue;
    }

    if (seq.edges.size() == expected) throw ParseError(line_no, "more edge lines than declared");
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(line_no, "expected '<u> <v> [w]'");
    }
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (!parse_number(tokens[0], u) || !parse_number(tokens[1], v)) {
      throw ParseError(line_no, "malformed vertex id");
    }
    if (u >= seq.vertex_count || v >= seq.vertex_count) {
      throw ParseError(line_no, "vertex out of range");
    }
    if (u == v) throw ParseError(line_no, "self-loop");
    Edge e{static_cast<VertexId>(u), static_cast<VertexId>(v)};
    if (tokens.size() == 3) {
      double w = 0.0;
      if (!parse_number(tokens[2], w) || !(w >= 0.0) || std::isinf(w)) {
        throw ParseError(line_no, "malformed weight");
      }
      e.weight = w;
    }
    seq.edges.push_back(e);
  }
  if (in.bad()) throw IoError("read error in " + std::string(source));
  if (!have_header) throw ParseError(line_no + 1, "missing header '<n> <m>'");
  if (seq.edges.size() != expected) {
    throw ParseError(line_no + 1, "expected " + std::to_string(expected) + " edges, found " +
                                      std::to_string(seq.edges.size()));
  }
  return seq;
}

EdgeSequence parse_edge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_edge_list(in, path.string());
}

void write_edge_list(const EdgeSequence& seq, std::ostream& out, std::string_view header) {
  std::size_t start = 0;
  while (start < header.size()) {
    std::size_t end = header.find('\n', start);
    if (end == std::string_view::npos) end = header.size();
    out << "# " << header.substr(start, end - start) << '\n';
    start = end + 1;
  }
  out << seq.vertex_count << ' ' << seq.edges.size() << '\n';
  for (const Edge& e : seq.edges) {
    out << e.u << ' ' << e.v;
    if (e.has_weight()) out << ' ' << format_double(e.weight);
    out << '\n';
  }
}

void write_edge_file(const EdgeSequence& seq, const std::filesystem::path& path,
                     std::string_view header) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_edge_list(seq, out, header);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detuf
