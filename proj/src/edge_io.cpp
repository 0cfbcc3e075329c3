#include "gsp/edge_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gsp {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

EdgeList read_edge_list(std::istream& in) {
  EdgeList out;
  int declared_n = -1;
  int max_index = -1;
  bool first_content = true;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line.substr(start));
    std::string a, b, c, extra;
    fields >> a >> b >> c >> extra;
    auto fail = [&](const std::string& why) {
      throw InvalidInput("edge file line " + std::to_string(line_no) + ": " +
                         why);
    };
    if (a == "n") {
      if (!first_content) fail("node count must precede all edges");
      if (!c.empty()) fail("unexpected token after node count");
      try {
        std::size_t used = 0;
        declared_n = std::stoi(b, &used);
        if (used != b.size() || declared_n < 0) fail("bad node count");
      } catch (const std::logic_error&) {
        fail("bad node count");
      }
      first_content = false;
      continue;
    }
    first_content = false;
    if (b.empty() || !extra.empty()) fail("expected `i j [w]`");
    Edge e;
    auto parse_int = [&](const std::string& s) {
      int v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size() || v < 0) {
        fail("bad node index '" + s + "'");
      }
      return v;
    };
    e.i = parse_int(a);
    e.j = parse_int(b);
    if (!c.empty()) {
      try {
        std::size_t used = 0;
        e.w = std::stod(c, &used);
        if (used != c.size()) fail("bad weight '" + c + "'");
      } catch (const std::logic_error&) {
        fail("bad weight '" + c + "'");
      }
    }
    if (e.i > e.j) std::swap(e.i, e.j);
    max_index = std::max(max_index, e.j);
    out.edges.push_back(e);
  }
  if (declared_n >= 0) {
    if (max_index >= declared_n) {
      throw InvalidInput("edge file: index exceeds declared node count");
    }
    out.n = declared_n;
  } else {
    out.n = max_index + 1;
  }
  out.validate();
  return out;
}

EdgeList read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge file '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const EdgeList& edges) {
  int max_index = -1;
  for (const auto& e : edges.edges) max_index = std::max(max_index, e.j);
  if (max_index + 1 != edges.n) out << "n " << edges.n << '\n';
  for (const auto& e : edges.edges) {
    out << e.i << ' ' << e.j;
    if (e.w != 1.0) out << ' ' << format_double(e.w);
    out << '\n';
  }
}

void write_edge_list_file(const std::string& path, const EdgeList& edges) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write edge file '" + path + "'");
  write_edge_list(out, edges);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace gsp
