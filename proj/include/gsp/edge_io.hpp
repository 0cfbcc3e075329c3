#pragma once

#include <iosfwd>
#include <string>

#include "gsp/graph.hpp"

namespace gsp {

/// Parses the plain-text edge format: one `i j [w]` per line, 0-based, `#`
/// comment lines, optional leading `n <count>` line. Edges given as j < i are
/// stored in canonical i < j orientation.
EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_list_file(const std::string& path);

/// Writes one edge per line; the weight is omitted when it equals 1 and an
/// `n <count>` line is emitted only when isolated trailing nodes exist.
void write_edge_list(std::ostream& out, const EdgeList& edges);
void write_edge_list_file(const std::string& path, const EdgeList& edges);

}  // namespace gsp
