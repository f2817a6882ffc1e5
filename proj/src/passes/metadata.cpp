#include "util.hpp"

namespace cyclometer::passes {

using namespace detail;

il::Program metadata_pass(il::Program p) {
    for (auto& c : p.components) {
        uint64_t next = 0;
        bool is_root = true;
        il::walk_mut(c.control, [&](il::Control& n) {
            if (n.kind != il::Control::Kind::Empty || is_root)
                n.attrs.set(std::string(attr::kId), next++);
            else
                n.attrs.erase(attr::kId);
            is_root = false;
        });

        // Each enable site gets its own forwarding group so that a group used
        // in several places can be told apart in the trace.
        std::map<std::string, int> sites;
        il::walk_mut(c.control, [&](il::Control& n) {
            if (n.kind != il::Control::Kind::Enable) return;
            const il::Group* g = c.find_group(n.group);
            if (!g || g->attrs.has(attr::kWrapper)) return;
            il::Group w;
            w.name = fresh_name(c, g->name + "__site" + std::to_string(sites[g->name]++));
            w.attrs.set(std::string(attr::kWrapper));
            w.assigns.push_back(assign(il::PortRef::hole(g->name, "go"), lit(1, 1)));
            if (g->kind == il::GroupKind::Static) {
                w.kind = il::GroupKind::Static;
                w.latency = g->latency;
            } else {
                w.assigns.push_back(assign(il::PortRef::hole(w.name, "done"), il::PortRef::hole(g->name, "done")));
            }
            n.group = w.name;
            c.groups.push_back(std::move(w));
        });
    }
    return p;
}

}  // namespace cyclometer::passes
