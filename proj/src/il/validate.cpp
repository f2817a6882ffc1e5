#include "cyclometer/il.hpp"

#include <functional>
#include <set>

namespace cyclometer::il {

std::string_view diag_kind_name(DiagKind k) {
    switch (k) {
        case DiagKind::MissingMain: return "MissingMain";
        case DiagKind::DuplicateName: return "DuplicateName";
        case DiagKind::UnknownComponent: return "UnknownComponent";
        case DiagKind::CyclicInstantiation: return "CyclicInstantiation";
        case DiagKind::BadParams: return "BadParams";
        case DiagKind::UnknownCell: return "UnknownCell";
        case DiagKind::UnknownGroup: return "UnknownGroup";
        case DiagKind::UnknownPort: return "UnknownPort";
        case DiagKind::WidthMismatch: return "WidthMismatch";
        case DiagKind::BadDestination: return "BadDestination";
        case DiagKind::BadDone: return "BadDone";
        case DiagKind::BadCondition: return "BadCondition";
        case DiagKind::BadWith: return "BadWith";
    }
    return "?";
}

namespace {

class Validator {
  public:
    explicit Validator(const Program& p) : p_(p) {}

    std::vector<Diagnostic> run() {
        check_program();
        for (const auto& c : p_.components) check_component(c);
        return std::move(diags_);
    }

  private:
    void report(DiagKind k, std::string msg, Location loc) { diags_.push_back({k, std::move(msg), loc}); }

    void check_program() {
        std::set<std::string> names;
        int mains = 0;
        for (const auto& c : p_.components) {
            if (!names.insert(c.name).second)
                report(DiagKind::DuplicateName, "duplicate component '" + c.name + "'", c.loc);
            if (c.name == "main") ++mains;
        }
        if (mains == 0) report(DiagKind::MissingMain, "program has no component named 'main'", {});

        // Instantiation graph must be acyclic.
        std::map<std::string, int> state;  // 1 = visiting, 2 = done
        std::function<void(const Component&)> dfs = [&](const Component& c) {
            state[c.name] = 1;
            for (const auto& cell : c.cells) {
                if (cell.is_primitive()) continue;
                const Component* sub = p_.find(cell.component());
                if (!sub) continue;
                int s = state[sub->name];
                if (s == 1) {
                    report(DiagKind::CyclicInstantiation,
                           "component '" + c.name + "' instantiates '" + sub->name + "' cyclically", cell.loc);
                } else if (s == 0) {
                    dfs(*sub);
                }
            }
            state[c.name] = 2;
        };
        for (const auto& c : p_.components)
            if (state[c.name] == 0) dfs(c);
    }

    void check_component(const Component& c) {
        std::set<std::string> names;
        for (const auto& port : c.inputs)
            if (!names.insert(port.name).second)
                report(DiagKind::DuplicateName, "duplicate port '" + port.name + "' in " + c.name, c.loc);
        for (const auto& port : c.outputs)
            if (!names.insert(port.name).second)
                report(DiagKind::DuplicateName, "duplicate port '" + port.name + "' in " + c.name, c.loc);

        // Cells and groups share one namespace: both become signal scopes.
        std::set<std::string> scoped;
        for (const auto& cell : c.cells) {
            if (!scoped.insert(cell.name).second)
                report(DiagKind::DuplicateName, "duplicate name '" + cell.name + "' in " + c.name, cell.loc);
            check_cell(cell);
        }
        for (const auto& g : c.groups)
            if (!scoped.insert(g.name).second)
                report(DiagKind::DuplicateName, "duplicate name '" + g.name + "' in " + c.name, g.loc);

        for (const auto& g : c.groups) check_group(c, g);
        for (const auto& a : c.continuous) check_assignment(c, a, nullptr);
        check_control(c, c.control);
    }

    void check_cell(const Cell& cell) {
        if (!cell.is_primitive()) {
            if (!p_.find(cell.component()))
                report(DiagKind::UnknownComponent, "unknown component '" + cell.component() + "'", cell.loc);
            return;
        }
        const auto& prim = cell.primitive();
        if (prim.params.size() != primitive_arity(prim.kind)) {
            report(DiagKind::BadParams, "wrong parameter count for " + cell.name, cell.loc);
            return;
        }
        auto w = prim.params[0];
        if (w < 1 || w > 64) report(DiagKind::BadParams, "width of " + cell.name + " must be in 1..64", cell.loc);
        if (prim.kind == PrimKind::CombMemD1) {
            if (prim.params[1] < 1) report(DiagKind::BadParams, "memory size of " + cell.name + " must be >= 1", cell.loc);
            if (prim.params[2] < 1 || prim.params[2] > 64)
                report(DiagKind::BadParams, "index width of " + cell.name + " must be in 1..64", cell.loc);
        }
        if (prim.kind == PrimKind::SeqMult && prim.params[1] < 1)
            report(DiagKind::BadParams, "latency of " + cell.name + " must be >= 1", cell.loc);
        if (prim.kind == PrimKind::Constant && w < 64 && (prim.params[1] >> w) != 0)
            report(DiagKind::BadParams, "constant " + cell.name + " does not fit its width", cell.loc);
    }

    void check_group(const Component& c, const Group& g) {
        int dones = 0;
        for (const auto& a : g.assigns) {
            if (a.dst.kind == PortRef::Kind::Hole && a.dst.owner == g.name && a.dst.port == "done") ++dones;
            check_assignment(c, a, &g);
        }
        if (g.kind == GroupKind::Dynamic && dones != 1)
            report(DiagKind::BadDone, "group '" + g.name + "' must have exactly one done condition", g.loc);
        if (g.kind != GroupKind::Dynamic && dones != 0)
            report(DiagKind::BadDone, "group '" + g.name + "' must not have a done condition", g.loc);
        if (g.kind == GroupKind::Static && g.latency < 1)
            report(DiagKind::BadDone, "static group '" + g.name + "' needs latency >= 1", g.loc);
    }

    // Reports resolution failures; returns the width when the port resolves.
    std::optional<uint32_t> resolve(const Component& c, const PortRef& ref, Location loc) {
        if (ref.kind == PortRef::Kind::Cell && !c.find_cell(ref.owner)) {
            report(DiagKind::UnknownCell, "unknown cell '" + ref.owner + "'", loc);
            return std::nullopt;
        }
        if (ref.kind == PortRef::Kind::Hole && !c.find_group(ref.owner)) {
            report(DiagKind::UnknownGroup, "unknown group '" + ref.owner + "'", loc);
            return std::nullopt;
        }
        auto w = port_width(p_, c, ref);
        if (!w) report(DiagKind::UnknownPort, "unknown port '" + ref.str() + "'", loc);
        return w;
    }

    std::optional<uint32_t> resolve_atom(const Component& c, const Atom& a, Location loc) {
        if (const auto* ref = std::get_if<PortRef>(&a)) return resolve(c, *ref, loc);
        const auto& lit = std::get<Literal>(a);
        if (lit.width < 1 || lit.width > 64) {
            report(DiagKind::WidthMismatch, "literal width must be in 1..64", loc);
        } else if (lit.width < 64 && (lit.value >> lit.width) != 0) {
            report(DiagKind::WidthMismatch, "literal " + atom_str(a) + " does not fit its width", loc);
        }
        return lit.width;
    }

    bool writable(const Component& c, const PortRef& ref) const {
        switch (ref.kind) {
            case PortRef::Kind::Hole:
                return true;
            case PortRef::Kind::This:
                if (ref.port == "done") return true;
                for (const auto& port : c.outputs)
                    if (port.name == ref.port) return true;
                return false;
            case PortRef::Kind::Cell: {
                const Cell* cell = c.find_cell(ref.owner);
                if (!cell) return false;
                if (cell->is_primitive()) {
                    for (const auto& spec : primitive_ports(cell->primitive()))
                        if (spec.name == ref.port) return spec.dir == Direction::In;
                    return false;
                }
                if (ref.port == "go") return true;
                const Component* sub = p_.find(cell->component());
                if (!sub) return false;
                for (const auto& port : sub->inputs)
                    if (port.name == ref.port) return true;
                return false;
            }
        }
        return false;
    }

    void check_guard(const Component& c, const Guard& g, Location loc) {
        switch (g.op) {
            case Guard::Op::True:
                return;
            case Guard::Op::Atom: {
                auto w = resolve_atom(c, g.atom, loc);
                if (w && *w != 1)
                    report(DiagKind::WidthMismatch, "guard operand '" + atom_str(g.atom) + "' is not 1-bit", loc);
                return;
            }
            case Guard::Op::Not:
            case Guard::Op::And:
            case Guard::Op::Or:
                for (const auto& a : g.args) check_guard(c, a, loc);
                return;
            case Guard::Op::Eq:
            case Guard::Op::Neq: {
                auto l = resolve_atom(c, g.args[0].atom, loc);
                auto r = resolve_atom(c, g.args[1].atom, loc);
                if (l && r && *l != *r)
                    report(DiagKind::WidthMismatch, "comparison of " + std::to_string(*l) + "-bit and " +
                                                        std::to_string(*r) + "-bit values",
                           loc);
                return;
            }
        }
    }

    void check_assignment(const Component& c, const Assignment& a, const Group* in_group) {
        auto dw = resolve(c, a.dst, a.loc);
        auto sw = resolve_atom(c, a.src, a.loc);
        if (dw && !writable(c, a.dst))
            report(DiagKind::BadDestination, "'" + a.dst.str() + "' cannot be assigned", a.loc);
        if (a.dst.kind == PortRef::Kind::Hole && a.dst.port == "done" &&
            (!in_group || a.dst.owner != in_group->name))
            report(DiagKind::BadDone, "'" + a.dst.str() + "' may only be assigned inside its group", a.loc);
        if (dw && sw && *dw != *sw)
            report(DiagKind::WidthMismatch,
                   "width mismatch: " + std::to_string(*sw) + "-bit '" + atom_str(a.src) + "' drives " +
                       std::to_string(*dw) + "-bit '" + a.dst.str() + "'",
                   a.loc);
        check_guard(c, a.guard, a.loc);
    }

    void check_control(const Component& c, const Control& ctl) {
        switch (ctl.kind) {
            case Control::Kind::Enable: {
                const Group* g = c.find_group(ctl.group);
                if (!g) {
                    report(DiagKind::UnknownGroup, "control enables undeclared group '" + ctl.group + "'", ctl.loc);
                } else if (g->kind == GroupKind::Comb) {
                    report(DiagKind::UnknownGroup, "combinational group '" + ctl.group + "' cannot be enabled",
                           ctl.loc);
                }
                break;
            }
            case Control::Kind::If:
            case Control::Kind::While: {
                auto w = resolve(c, *ctl.cond, ctl.loc);
                if (w && *w != 1)
                    report(DiagKind::BadCondition, "condition '" + ctl.cond->str() + "' is not 1-bit", ctl.loc);
                if (!ctl.with.empty()) {
                    const Group* g = c.find_group(ctl.with);
                    if (!g || g->kind != GroupKind::Comb)
                        report(DiagKind::BadWith, "'with' group '" + ctl.with + "' must be combinational", ctl.loc);
                }
                break;
            }
            default:
                break;
        }
        for (const auto& ch : ctl.children) check_control(c, ch);
    }

    const Program& p_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate(const Program& p) { return Validator(p).run(); }

}  // namespace cyclometer::il
