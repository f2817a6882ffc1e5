#include "util.hpp"

#include <algorithm>
#include <set>

namespace cyclometer::passes {

using namespace detail;
using Kind = il::Control::Kind;

std::optional<uint64_t> group_latency(const il::Component& c, const il::Group& g) {
    if (g.kind == il::GroupKind::Static) return g.latency;
    if (g.kind == il::GroupKind::Comb) return std::nullopt;
    if (auto n = g.attrs.get(attr::kPromotable)) return *n;
    if (auto callee = wrapper_callee(g)) {
        const il::Group* cg = c.find_group(*callee);
        return cg ? group_latency(c, *cg) : std::nullopt;
    }
    // `done = r.done` with `r.write_en = 1` unconditionally finishes in one
    // cycle, for registers and memories alike.
    const il::Assignment* done = g.done_assign();
    if (!done || !done->guard.is_true()) return std::nullopt;
    const auto* ref = std::get_if<il::PortRef>(&done->src);
    if (!ref || ref->kind != il::PortRef::Kind::Cell || ref->port != "done") return std::nullopt;
    const il::Cell* cell = c.find_cell(ref->owner);
    if (!cell || !cell->is_primitive()) return std::nullopt;
    const auto kind = cell->primitive().kind;
    if (kind != il::PrimKind::Register && kind != il::PrimKind::CombMemD1) return std::nullopt;
    for (const auto& a : g.assigns) {
        if (a.dst != il::PortRef::cell(ref->owner, "write_en") || !a.guard.is_true()) continue;
        const auto* l = std::get_if<il::Literal>(&a.src);
        if (l && l->value != 0) return 1;
    }
    return std::nullopt;
}

std::optional<uint64_t> control_latency(const il::Component& c, const il::Control& ctl) {
    switch (ctl.kind) {
        case Kind::Enable: {
            const il::Group* g = c.find_group(ctl.group);
            return g ? group_latency(c, *g) : std::nullopt;
        }
        case Kind::StaticSeq:
        case Kind::StaticPar: {
            if (ctl.children.empty()) return std::nullopt;
            uint64_t total = 0;
            for (const auto& ch : ctl.children) {
                auto l = control_latency(c, ch);
                if (!l) return std::nullopt;
                total = ctl.kind == Kind::StaticSeq ? total + *l : std::max(total, *l);
            }
            return total;
        }
        default:
            return std::nullopt;
    }
}

namespace {

void drop_empties(il::Control& n) {
    std::erase_if(n.children, [](const il::Control& ch) { return ch.kind == Kind::Empty; });
}

void promote(const il::Component& c, il::Control& n, uint64_t& next) {
    switch (n.kind) {
        case Kind::Seq: {
            for (auto& ch : n.children) promote(c, ch, next);
            drop_empties(n);
            std::vector<bool> known;
            for (const auto& ch : n.children) known.push_back(control_latency(c, ch).has_value());
            if (!n.children.empty() && std::all_of(known.begin(), known.end(), [](bool b) { return b; })) {
                n.kind = Kind::StaticSeq;
                return;
            }
            std::vector<il::Control> out;
            for (std::size_t i = 0; i < n.children.size();) {
                std::size_t j = i;
                while (j < n.children.size() && known[j]) ++j;
                if (j - i >= 2) {
                    il::Control run;
                    run.kind = Kind::StaticSeq;
                    run.attrs.set(std::string(attr::kId), next++);
                    for (std::size_t k = i; k < j; ++k) run.children.push_back(std::move(n.children[k]));
                    out.push_back(std::move(run));
                    i = j;
                } else if (j > i) {
                    for (std::size_t k = i; k < j; ++k) out.push_back(std::move(n.children[k]));
                    i = j;
                } else {
                    out.push_back(std::move(n.children[i]));
                    ++i;
                }
            }
            n.children = std::move(out);
            return;
        }
        case Kind::Par: {
            for (auto& ch : n.children) promote(c, ch, next);
            drop_empties(n);
            bool all = !n.children.empty() && std::all_of(n.children.begin(), n.children.end(), [&](const auto& ch) {
                return control_latency(c, ch).has_value();
            });
            if (all) n.kind = Kind::StaticPar;
            return;
        }
        case Kind::If:
        case Kind::While:
            for (auto& ch : n.children) promote(c, ch, next);
            return;
        default:
            return;
    }
}

}  // namespace

il::Program static_promote(il::Program p) {
    for (auto& c : p.components) {
        uint64_t next = next_id(c.control);
        promote(c, c.control, next);
    }
    return p;
}

il::Program remove_dead_cells(il::Program p) {
    auto removable = [](const il::Cell& cell) {
        if (cell.attrs.has(attr::kProtected) || cell.attrs.has(attr::kExternal) || !cell.is_primitive()) return false;
        switch (cell.primitive().kind) {
            case il::PrimKind::Adder:
            case il::PrimKind::Subtractor:
            case il::PrimKind::Eq:
            case il::PrimKind::Lt:
            case il::PrimKind::Constant:
            case il::PrimKind::Wire:
                return true;
            default:
                return false;
        }
    };
    for (auto& c : p.components) {
        for (bool changed = true; changed;) {
            changed = false;
            std::set<std::string> read;
            auto note = [&](const il::Assignment& a) {
                std::vector<il::PortRef> refs;
                a.guard.collect_ports(refs);
                if (const auto* r = std::get_if<il::PortRef>(&a.src)) refs.push_back(*r);
                for (const auto& r : refs)
                    if (r.kind == il::PortRef::Kind::Cell) read.insert(r.owner);
            };
            for (const auto& g : c.groups)
                for (const auto& a : g.assigns) note(a);
            for (const auto& a : c.continuous) note(a);
            il::walk(c.control, [&](const il::Control& n) {
                if (n.cond && n.cond->kind == il::PortRef::Kind::Cell) read.insert(n.cond->owner);
            });

            std::set<std::string> dead;
            for (const auto& cell : c.cells)
                if (removable(cell) && !read.count(cell.name)) dead.insert(cell.name);
            if (dead.empty()) break;
            changed = true;
            std::erase_if(c.cells, [&](const il::Cell& cell) { return dead.count(cell.name) > 0; });
            auto writes_dead = [&](const il::Assignment& a) {
                return a.dst.kind == il::PortRef::Kind::Cell && dead.count(a.dst.owner) > 0;
            };
            for (auto& g : c.groups) std::erase_if(g.assigns, writes_dead);
            std::erase_if(c.continuous, writes_dead);
        }
    }
    return p;
}

}  // namespace cyclometer::passes
