#ifndef SINKPOP_GRAPH_IO_HPP
#define SINKPOP_GRAPH_IO_HPP

#include <iosfwd>
#include <string>

#include "sinkpop/multigraph.hpp"

namespace sinkpop {

/// Edge-list text format: first line `n m`, then m lines `u v` (0-based,
/// `u u` is a self-loop).
Multigraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Multigraph& g);

/// Orientation text format: m lines `tail head`, in edge-input order.
Orientation read_orientation(std::istream& in, const Multigraph& g);
void write_orientation(std::ostream& out, const Multigraph& g,
                       const Orientation& o);

/// Resolves `cycle:N`, `lollipop:N`, `theta:K`, `complete:N`, `random:N:M:SEED`
/// pseudo-files, or reads an edge-list file from disk.
Multigraph load_graph(const std::string& path_or_spec);

} // namespace sinkpop

#endif
