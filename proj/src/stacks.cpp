#include "sinkpop/stacks.hpp"

namespace sinkpop {

Orientation current_orientation(const StackSource& src, const StackPointer& ptr,
                                const Multigraph& g) {
    Orientation o(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        o.set_bit(e, static_cast<std::uint8_t>(src.orientation_at(g, e, ptr.depth(e))));
    return o;
}

} // namespace sinkpop
