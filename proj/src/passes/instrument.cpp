#include "util.hpp"

namespace cyclometer::passes {

using namespace detail;

std::string_view probe_kind_name(ProbeKind k) {
    switch (k) {
        case ProbeKind::GA: return "GA";
        case ProbeKind::CG: return "CG";
        case ProbeKind::CC: return "CC";
        case ProbeKind::CP: return "CP";
    }
    return "?";
}

std::string Probe::name() const {
    std::string kind_s(probe_kind_name(kind));
    if (kind == ProbeKind::GA) return parent + "__" + component + "__" + kind_s;
    return child + "__" + parent + "__" + component + "__" + kind_s;
}

std::optional<Probe> demangle_probe(std::string_view name, const il::Component& c) {
    for (ProbeKind k : {ProbeKind::GA, ProbeKind::CG, ProbeKind::CC, ProbeKind::CP}) {
        std::string suffix = "__" + c.name + "__" + std::string(probe_kind_name(k));
        if (name.size() <= suffix.size() || name.substr(name.size() - suffix.size()) != suffix) continue;
        std::string head(name.substr(0, name.size() - suffix.size()));
        if (k == ProbeKind::GA) {
            if (!c.find_group(head)) return std::nullopt;
            return Probe{k, c.name, head, {}};
        }
        // Try every "__" split; the parent must be a group and the child a group or cell.
        for (std::size_t pos = head.find("__"); pos != std::string::npos; pos = head.find("__", pos + 1)) {
            std::string child = head.substr(0, pos);
            std::string parent = head.substr(pos + 2);
            if (child.empty() || parent.empty() || !c.find_group(parent)) continue;
            bool child_ok = k == ProbeKind::CG ? c.find_group(child) != nullptr : c.find_cell(child) != nullptr;
            if (child_ok) return Probe{k, c.name, parent, child};
        }
        return std::nullopt;
    }
    return std::nullopt;
}

namespace {

il::Cell probe_cell(const std::string& name) {
    il::Cell cell = make_cell(name, il::PrimKind::Wire, {1});
    cell.attrs.set(std::string(attr::kProtected));
    cell.attrs.set(std::string(attr::kProbe));
    return cell;
}

il::Assignment probe_assign(const std::string& name, il::Guard guard) {
    il::Assignment a = assign(il::PortRef::cell(name, "in"), lit(1, 1), std::move(guard));
    a.attrs.set(std::string(attr::kProtected));
    return a;
}

}  // namespace

namespace detail {

void instrument_group(const il::Program& p, il::Component& c, const std::string& group_name) {
    il::Group* g = c.find_group(group_name);
    if (!g || g->kind == il::GroupKind::Comb) return;

    std::vector<std::pair<Probe, il::Guard>> calls;
    for (const auto& a : g->assigns) {
        if (a.attrs.has(attr::kProtected)) continue;
        Probe probe{ProbeKind::CG, c.name, g->name, a.dst.owner};
        if (a.dst.kind == il::PortRef::Kind::Hole) {
            if (a.dst.port != "go" || a.dst.owner == g->name) continue;
        } else if (a.dst.kind == il::PortRef::Kind::Cell) {
            const il::Cell* cell = c.find_cell(a.dst.owner);
            if (!cell) continue;
            if (cell->is_primitive()) {
                auto go = il::primitive_go_port(cell->primitive().kind);
                if (!go || *go != a.dst.port) continue;
                probe.kind = ProbeKind::CP;
            } else {
                if (a.dst.port != "go" || !p.find(cell->component())) continue;
                probe.kind = ProbeKind::CC;
            }
        } else {
            continue;
        }

        il::Guard term = a.guard;
        if (const auto* l = std::get_if<il::Literal>(&a.src)) {
            if (l->value == 0) continue;
        } else {
            term = il::Guard::conj(std::move(term), il::Guard::of(a.src));
        }
        auto it = std::find_if(calls.begin(), calls.end(), [&](const auto& e) { return e.first == probe; });
        if (it == calls.end())
            calls.emplace_back(probe, std::move(term));
        else
            it->second = il::Guard::disj(std::move(it->second), std::move(term));
    }

    std::vector<il::Cell> cells;
    std::vector<il::Assignment> assigns;
    Probe ga{ProbeKind::GA, c.name, g->name, {}};
    if (!c.find_cell(ga.name())) {
        cells.push_back(probe_cell(ga.name()));
        assigns.push_back(probe_assign(ga.name(), il::Guard::always()));
    }
    for (auto& [probe, guard] : calls) {
        if (c.find_cell(probe.name())) continue;
        cells.push_back(probe_cell(probe.name()));
        assigns.push_back(probe_assign(probe.name(), std::move(guard)));
    }
    for (auto& a : assigns) g->assigns.push_back(std::move(a));
    for (auto& cell : cells) c.cells.push_back(std::move(cell));
}

}  // namespace detail

il::Program instrument(il::Program p) {
    for (auto& c : p.components) {
        std::vector<std::string> names;
        for (const auto& g : c.groups) names.push_back(g.name);
        for (const auto& n : names) instrument_group(p, c, n);
    }
    return p;
}

namespace {

// Replaces `!cell.done` with `!1'd0`; returns true when anything changed.
bool drop_done_negation(il::Guard& g, const std::string& cell) {
    if (g.op == il::Guard::Op::Not && g.args[0].op == il::Guard::Op::Atom) {
        const auto* ref = std::get_if<il::PortRef>(&g.args[0].atom);
        if (ref && ref->kind == il::PortRef::Kind::Cell && ref->owner == cell && ref->port == "done") {
            g.args[0].atom = lit(1, 0);
            return true;
        }
    }
    bool changed = false;
    for (auto& a : g.args) changed |= drop_done_negation(a, cell);
    return changed;
}

}  // namespace

il::Program rewrite_probe_done_guards(il::Program p) {
    for (auto& c : p.components) {
        for (auto& g : c.groups) {
            for (auto& a : g.assigns) {
                if (!a.attrs.has(attr::kProtected) || a.dst.kind != il::PortRef::Kind::Cell) continue;
                const il::Cell* probe_cell = c.find_cell(a.dst.owner);
                if (!probe_cell || !probe_cell->attrs.has(attr::kProbe)) continue;
                auto probe = demangle_probe(a.dst.owner, c);
                if (!probe || probe->kind != ProbeKind::CP) continue;
                const il::Cell* target = c.find_cell(probe->child);
                if (!target || !target->is_primitive()) continue;
                auto go = il::primitive_go_port(target->primitive().kind);
                if (!go) continue;
                if (drop_done_negation(a.guard, probe->child))
                    a.guard = il::Guard::conj(std::move(a.guard), il::Guard::port(il::PortRef::cell(probe->child, *go)));
            }
        }
    }
    return p;
}

}  // namespace cyclometer::passes
