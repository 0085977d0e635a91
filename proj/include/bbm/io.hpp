#pragma once

// Instance files.
//
// .bbm is line oriented with 1-based indices:
//   c <comment>
//   p bbm <nA> <nB> <m>
//   a <i> <b>        capacity of bidder i (default 1)
//   o <j> <b>        capacity of object j (default 1)
//   e <i> <j> <w>    edge
//
// Matrix Market input is "coordinate real|integer|pattern general" with
// rows as bidders; capacities come from an optional side file holding one
// integer per line, bidders first.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bbm/graph.hpp"

namespace bbm {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t' || s[k] == '\r')) ++k;
    const std::size_t start = k;
    while (k < s.size() && s[k] != ' ' && s[k] != '\t' && s[k] != '\r') ++k;
    if (k > start) out.push_back(s.substr(start, k - start));
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(std::string("bad ") + what + " '" + std::string(tok) + "'", line);
  }
  return value;
}

/// Calls fn(line_number, line) for every line.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    fn(line_no, text.substr(pos, end - pos));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

inline BipartiteGraph build_with_lines(std::size_t n_a, std::size_t n_b, std::vector<Edge> edges,
                                       const std::vector<std::int64_t>& ba,
                                       const std::vector<std::int64_t>& bb,
                                       const std::vector<std::size_t>& edge_line) {
  try {
    return build_graph(n_a, n_b, std::move(edges), ba, bb);
  } catch (const GraphError& err) {
    const std::size_t line = err.edge() && *err.edge() < edge_line.size() ? edge_line[*err.edge()] : 0;
    throw ParseError(err.what(), line);
  }
}

}  // namespace detail

inline BipartiteGraph parse_bbm(std::string_view text) {
  bool have_header = false;
  std::size_t n_a = 0, n_b = 0, m = 0;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_line;
  std::vector<std::int64_t> ba, bb;

  detail::for_each_line(text, [&](std::size_t ln, std::string_view line) {
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0] == "c") return;
    if (tok[0] == "p") {
      if (have_header) throw ParseError("second p line", ln);
      if (tok.size() != 5 || tok[1] != "bbm") throw ParseError("expected 'p bbm <nA> <nB> <m>'", ln);
      n_a = detail::parse_number<std::size_t>(tok[2], ln, "bidder count");
      n_b = detail::parse_number<std::size_t>(tok[3], ln, "object count");
      m = detail::parse_number<std::size_t>(tok[4], ln, "edge count");
      ba.assign(n_a, 1);
      bb.assign(n_b, 1);
      edges.reserve(m);
      have_header = true;
      return;
    }
    if (!have_header) throw ParseError("'" + std::string(tok[0]) + "' line before p line", ln);
    if (tok[0] == "a" || tok[0] == "o") {
      if (tok.size() != 3) throw ParseError("expected '" + std::string(tok[0]) + " <index> <b>'", ln);
      const auto idx = detail::parse_number<std::size_t>(tok[1], ln, "vertex index");
      const auto cap = detail::parse_number<std::int64_t>(tok[2], ln, "capacity");
      auto& target = tok[0] == "a" ? ba : bb;
      if (idx < 1 || idx > target.size()) throw ParseError("vertex index out of range", ln);
      if (cap < 1) throw ParseError("capacity must be positive", ln);
      target[idx - 1] = cap;
      return;
    }
    if (tok[0] == "e") {
      if (tok.size() != 4) throw ParseError("expected 'e <i> <j> <w>'", ln);
      const auto i = detail::parse_number<std::size_t>(tok[1], ln, "bidder index");
      const auto j = detail::parse_number<std::size_t>(tok[2], ln, "object index");
      const auto w = detail::parse_number<double>(tok[3], ln, "weight");
      if (i < 1 || i > n_a) throw ParseError("bidder index out of range", ln);
      if (j < 1 || j > n_b) throw ParseError("object index out of range", ln);
      if (edges.size() == m) throw ParseError("more edges than the p line declares", ln);
      edges.push_back({static_cast<VertexId>(i - 1), static_cast<VertexId>(j - 1), w});
      edge_line.push_back(ln);
      return;
    }
    throw ParseError("unknown line type '" + std::string(tok[0]) + "'", ln);
  });
  if (!have_header) throw ParseError("missing p line", 0);
  if (edges.size() != m) {
    throw ParseError("p line declares " + std::to_string(m) + " edges, found " +
                         std::to_string(edges.size()),
                     0);
  }
  return detail::build_with_lines(n_a, n_b, std::move(edges), ba, bb, edge_line);
}

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Writes effective capacities; parse_bbm of the result rebuilds `g`.
inline std::string write_bbm(const BipartiteGraph& g) {
  std::string out = "p bbm " + std::to_string(g.num_bidders()) + " " +
                    std::to_string(g.num_objects()) + " " + std::to_string(g.num_edges()) + "\n";
  for (VertexId i = 0; i < g.num_bidders(); ++i) {
    if (g.bidder_capacity(i) != 1 && g.bidder_degree(i) > 0) {
      out += "a " + std::to_string(i + 1) + " " + std::to_string(g.bidder_capacity(i)) + "\n";
    }
  }
  for (VertexId j = 0; j < g.num_objects(); ++j) {
    if (g.object_capacity(j) != 1 && g.object_degree(j) > 0) {
      out += "o " + std::to_string(j + 1) + " " + std::to_string(g.object_capacity(j)) + "\n";
    }
  }
  for (const Edge& e : g.edges()) {
    out += "e " + std::to_string(e.bidder + 1) + " " + std::to_string(e.object + 1) + " " +
           format_double(e.weight) + "\n";
  }
  return out;
}

inline BipartiteGraph parse_mtx(std::string_view text,
                                std::optional<std::string_view> capacities = std::nullopt) {
  bool banner = false, have_size = false, pattern = false;
  std::size_t rows = 0, cols = 0, nnz = 0;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_line;
  detail::for_each_line(text, [&](std::size_t ln, std::string_view line) {
    const auto tok = detail::split_ws(line);
    if (!banner) {
      if (tok.size() < 5 || tok[0] != "%%MatrixMarket" || tok[1] != "matrix" ||
          tok[2] != "coordinate") {
        throw ParseError("expected '%%MatrixMarket matrix coordinate ...' banner", ln);
      }
      if (tok[3] == "pattern") {
        pattern = true;
      } else if (tok[3] != "real" && tok[3] != "integer") {
        throw ParseError("unsupported field '" + std::string(tok[3]) + "'", ln);
      }
      if (tok[4] != "general") throw ParseError("only 'general' symmetry is supported", ln);
      banner = true;
      return;
    }
    if (tok.empty() || tok[0].front() == '%') return;
    if (!have_size) {
      if (tok.size() != 3) throw ParseError("expected '<rows> <cols> <nnz>'", ln);
      rows = detail::parse_number<std::size_t>(tok[0], ln, "row count");
      cols = detail::parse_number<std::size_t>(tok[1], ln, "column count");
      nnz = detail::parse_number<std::size_t>(tok[2], ln, "entry count");
      edges.reserve(nnz);
      have_size = true;
      return;
    }
    if (tok.size() != (pattern ? 2u : 3u)) throw ParseError("malformed entry", ln);
    const auto i = detail::parse_number<std::size_t>(tok[0], ln, "row index");
    const auto j = detail::parse_number<std::size_t>(tok[1], ln, "column index");
    const double w = pattern ? 1.0 : detail::parse_number<double>(tok[2], ln, "value");
    if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("entry index out of range", ln);
    if (edges.size() == nnz) throw ParseError("more entries than declared", ln);
    edges.push_back({static_cast<VertexId>(i - 1), static_cast<VertexId>(j - 1), w});
    edge_line.push_back(ln);
  });
  if (!banner || !have_size) throw ParseError("missing banner or size line", 0);
  if (edges.size() != nnz) {
    throw ParseError("size line declares " + std::to_string(nnz) + " entries, found " +
                         std::to_string(edges.size()),
                     0);
  }
  std::vector<std::int64_t> ba(rows, 1), bb(cols, 1);
  if (capacities) {
    std::vector<std::int64_t> caps;
    detail::for_each_line(*capacities, [&](std::size_t ln, std::string_view line) {
      const auto tok = detail::split_ws(line);
      if (tok.empty()) return;
      if (tok.size() != 1) throw ParseError("capacity file: one integer per line", ln);
      caps.push_back(detail::parse_number<std::int64_t>(tok[0], ln, "capacity"));
    });
    if (caps.size() != rows + cols) {
      throw ParseError("capacity file has " + std::to_string(caps.size()) + " values, expected " +
                           std::to_string(rows + cols),
                       0);
    }
    std::copy(caps.begin(), caps.begin() + static_cast<std::ptrdiff_t>(rows), ba.begin());
    std::copy(caps.begin() + static_cast<std::ptrdiff_t>(rows), caps.end(), bb.begin());
  }
  return detail::build_with_lines(rows, cols, std::move(edges), ba, bb, edge_line);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bbm
