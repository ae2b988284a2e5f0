#include "sinkpop/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace sinkpop {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw Error(ErrorCode::ParseError, what);
}

} // namespace

Multigraph read_edge_list(std::istream& in) {
    int n = 0, m = 0;
    if (!(in >> n >> m)) parse_fail("edge list: expected header `n m`");
    if (n < 0 || m < 0) parse_fail("edge list: negative n or m");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (int i = 0; i < m; ++i) {
        int u = 0, v = 0;
        if (!(in >> u >> v)) {
            std::ostringstream msg;
            msg << "edge list: expected " << m << " edges, got " << i;
            parse_fail(msg.str());
        }
        edges.emplace_back(u, v);
    }
    try {
        return Multigraph::build(n, edges);
    } catch (const Error& e) {
        parse_fail(std::string("edge list: ") + e.what());
    }
}

void write_edge_list(std::ostream& out, const Multigraph& g) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) out << e.a << ' ' << e.b << '\n';
}

Orientation read_orientation(std::istream& in, const Multigraph& g) {
    Orientation o(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        int tail = 0, head = 0;
        if (!(in >> tail >> head))
            parse_fail("orientation: fewer lines than edges");
        const Edge& ed = g.edge(e);
        if (ed.is_self_loop()) {
            if (tail != ed.a || head != ed.a)
                parse_fail("orientation: self-loop line must repeat the vertex");
            o.set_bit(e, 0);
        } else if (tail == ed.a && head == ed.b) {
            o.set_bit(e, 1);
        } else if (tail == ed.b && head == ed.a) {
            o.set_bit(e, 0);
        } else {
            std::ostringstream msg;
            msg << "orientation: line " << e << " = `" << tail << ' ' << head
                << "` does not match edge (" << ed.a << "," << ed.b << ")";
            parse_fail(msg.str());
        }
    }
    return o;
}

void write_orientation(std::ostream& out, const Multigraph& g,
                       const Orientation& o) {
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        out << o.tail(g, e) << ' ' << o.head(g, e) << '\n';
}

Multigraph load_graph(const std::string& path_or_spec) {
    auto colon = path_or_spec.find(':');
    if (colon != std::string::npos) {
        std::string kind = path_or_spec.substr(0, colon);
        std::string rest = path_or_spec.substr(colon + 1);
        auto parse_int = [&](const std::string& s) {
            try {
                std::size_t used = 0;
                int value = std::stoi(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return value;
            } catch (const std::exception&) {
                parse_fail("pseudo-file: bad integer in `" + path_or_spec + "`");
            }
        };
        if (kind == "cycle") return make_cycle(parse_int(rest));
        if (kind == "lollipop") return make_lollipop(parse_int(rest));
        if (kind == "theta") return make_theta(parse_int(rest));
        if (kind == "complete") return make_complete(parse_int(rest));
        if (kind == "random") {
            auto c1 = rest.find(':');
            auto c2 = rest.find(':', c1 == std::string::npos ? rest.size() : c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos)
                parse_fail("pseudo-file: expected random:N:M:SEED");
            int n = parse_int(rest.substr(0, c1));
            int m = parse_int(rest.substr(c1 + 1, c2 - c1 - 1));
            std::uint64_t seed = std::stoull(rest.substr(c2 + 1));
            return make_random(n, m, seed);
        }
        parse_fail("pseudo-file: unknown generator `" + kind + "`");
    }
    std::ifstream in(path_or_spec);
    if (!in) parse_fail("cannot open graph file `" + path_or_spec + "`");
    return read_edge_list(in);
}

} // namespace sinkpop
