#include "cyclometer/il.hpp"

#include <algorithm>
#include <array>

namespace cyclometer::il {

ParseError::ParseError(const std::string& msg, Location loc)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + msg), loc_(loc) {}

bool Attributes::has(std::string_view key) const { return items_.find(key) != items_.end(); }

std::optional<uint64_t> Attributes::get(std::string_view key) const {
    auto it = items_.find(key);
    if (it == items_.end()) return std::nullopt;
    return it->second;
}

void Attributes::set(std::string key, std::optional<uint64_t> value) { items_[std::move(key)] = value; }

void Attributes::erase(std::string_view key) {
    auto it = items_.find(key);
    if (it != items_.end()) items_.erase(it);
}

namespace {

struct PrimInfo {
    PrimKind kind;
    std::string_view name;
    std::size_t arity;
};

constexpr std::array<PrimInfo, 9> kPrims{{
    {PrimKind::Register, "std_reg", 1},
    {PrimKind::CombMemD1, "comb_mem_d1", 3},
    {PrimKind::Adder, "std_add", 1},
    {PrimKind::Subtractor, "std_sub", 1},
    {PrimKind::Eq, "std_eq", 1},
    {PrimKind::Lt, "std_lt", 1},
    {PrimKind::SeqMult, "std_seq_mult", 2},
    {PrimKind::Constant, "std_const", 2},
    {PrimKind::Wire, "std_wire", 1},
}};

const PrimInfo& info(PrimKind k) {
    for (const auto& p : kPrims)
        if (p.kind == k) return p;
    throw std::logic_error("unknown primitive kind");
}

}  // namespace

std::string_view primitive_name(PrimKind kind) { return info(kind).name; }

std::optional<PrimKind> primitive_from_name(std::string_view name) {
    for (const auto& p : kPrims)
        if (p.name == name) return p.kind;
    return std::nullopt;
}

std::size_t primitive_arity(PrimKind kind) { return info(kind).arity; }

std::vector<PortSpec> primitive_ports(const Primitive& prim) {
    const uint32_t w = prim.width();
    switch (prim.kind) {
        case PrimKind::Register:
            return {{"in", w, Direction::In}, {"write_en", 1, Direction::In},
                    {"out", w, Direction::Out}, {"done", 1, Direction::Out}};
        case PrimKind::CombMemD1: {
            const auto idx = static_cast<uint32_t>(prim.params.size() > 2 ? prim.params[2] : 1);
            return {{"addr0", idx, Direction::In},     {"write_data", w, Direction::In},
                    {"write_en", 1, Direction::In},    {"read_data", w, Direction::Out},
                    {"done", 1, Direction::Out}};
        }
        case PrimKind::Adder:
        case PrimKind::Subtractor:
            return {{"left", w, Direction::In}, {"right", w, Direction::In}, {"out", w, Direction::Out}};
        case PrimKind::Eq:
        case PrimKind::Lt:
            return {{"left", w, Direction::In}, {"right", w, Direction::In}, {"out", 1, Direction::Out}};
        case PrimKind::SeqMult:
            return {{"left", w, Direction::In},
                    {"right", w, Direction::In},
                    {"go", 1, Direction::In},
                    {"out", w, Direction::Out},
                    {"done", 1, Direction::Out}};
        case PrimKind::Constant:
            return {{"out", w, Direction::Out}};
        case PrimKind::Wire:
            return {{"in", w, Direction::In}, {"out", w, Direction::Out}};
    }
    return {};
}

std::optional<std::string> primitive_go_port(PrimKind kind) {
    switch (kind) {
        case PrimKind::Register:
        case PrimKind::CombMemD1:
            return "write_en";
        case PrimKind::SeqMult:
            return "go";
        default:
            return std::nullopt;
    }
}

std::string PortRef::str() const {
    switch (kind) {
        case Kind::Cell:
            return owner + "." + port;
        case Kind::Hole:
            return owner + "[" + port + "]";
        case Kind::This:
            return port;
    }
    return {};
}

std::string atom_str(const Atom& a) {
    if (const auto* p = std::get_if<PortRef>(&a)) return p->str();
    const auto& l = std::get<Literal>(a);
    return std::to_string(l.width) + "'d" + std::to_string(l.value);
}

Guard Guard::negate(Guard g) {
    Guard r;
    r.op = Op::Not;
    r.args.push_back(std::move(g));
    return r;
}

Guard Guard::conj(Guard a, Guard b) {
    if (a.is_true()) return b;
    if (b.is_true()) return a;
    Guard r;
    r.op = Op::And;
    r.args.push_back(std::move(a));
    r.args.push_back(std::move(b));
    return r;
}

Guard Guard::disj(Guard a, Guard b) {
    if (a.is_true() || b.is_true()) return always();
    Guard r;
    r.op = Op::Or;
    r.args.push_back(std::move(a));
    r.args.push_back(std::move(b));
    return r;
}

Guard Guard::eq(il::Atom a, il::Atom b) {
    Guard r;
    r.op = Op::Eq;
    r.args.push_back(of(std::move(a)));
    r.args.push_back(of(std::move(b)));
    return r;
}

Guard Guard::neq(il::Atom a, il::Atom b) {
    Guard r = eq(std::move(a), std::move(b));
    r.op = Op::Neq;
    return r;
}

void Guard::collect_ports(std::vector<PortRef>& out) const {
    if (op == Op::Atom) {
        if (const auto* p = std::get_if<PortRef>(&atom)) out.push_back(*p);
    }
    for (const auto& a : args) a.collect_ports(out);
}

const Assignment* Group::done_assign() const {
    for (const auto& a : assigns)
        if (a.dst.kind == PortRef::Kind::Hole && a.dst.owner == name && a.dst.port == "done") return &a;
    return nullptr;
}

Control Control::enable(std::string g) {
    Control c;
    c.kind = Kind::Enable;
    c.group = std::move(g);
    return c;
}

Control Control::seq(std::vector<Control> cs) {
    Control c;
    c.kind = Kind::Seq;
    c.children = std::move(cs);
    return c;
}

Control Control::par(std::vector<Control> cs) {
    Control c;
    c.kind = Kind::Par;
    c.children = std::move(cs);
    return c;
}

Control Control::if_(PortRef cond, Control then, Control els, std::string with) {
    Control c;
    c.kind = Kind::If;
    c.cond = std::move(cond);
    c.with = std::move(with);
    c.children.push_back(std::move(then));
    c.children.push_back(std::move(els));
    return c;
}

Control Control::while_(PortRef cond, Control body, std::string with) {
    Control c;
    c.kind = Kind::While;
    c.cond = std::move(cond);
    c.with = std::move(with);
    c.children.push_back(std::move(body));
    return c;
}

std::string_view control_kind_name(Control::Kind k) {
    switch (k) {
        case Control::Kind::Empty: return "empty";
        case Control::Kind::Enable: return "enable";
        case Control::Kind::Seq: return "seq";
        case Control::Kind::Par: return "par";
        case Control::Kind::If: return "if";
        case Control::Kind::While: return "while";
        case Control::Kind::StaticSeq: return "static_seq";
        case Control::Kind::StaticPar: return "static_par";
    }
    return "?";
}

const Cell* Component::find_cell(std::string_view n) const {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) { return c.name == n; });
    return it == cells.end() ? nullptr : &*it;
}

Cell* Component::find_cell(std::string_view n) {
    return const_cast<Cell*>(static_cast<const Component*>(this)->find_cell(n));
}

const Group* Component::find_group(std::string_view n) const {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.name == n; });
    return it == groups.end() ? nullptr : &*it;
}

Group* Component::find_group(std::string_view n) {
    return const_cast<Group*>(static_cast<const Component*>(this)->find_group(n));
}

const Component* Program::find(std::string_view n) const {
    auto it = std::find_if(components.begin(), components.end(), [&](const Component& c) { return c.name == n; });
    return it == components.end() ? nullptr : &*it;
}

Component* Program::find(std::string_view n) {
    return const_cast<Component*>(static_cast<const Program*>(this)->find(n));
}

const Component& Program::main() const {
    const auto* m = find("main");
    if (!m) throw std::runtime_error("program has no main component");
    return *m;
}

std::optional<uint32_t> port_width(const Program& p, const Component& c, const PortRef& ref) {
    switch (ref.kind) {
        case PortRef::Kind::Hole:
            if (!c.find_group(ref.owner)) return std::nullopt;
            if (ref.port != "go" && ref.port != "done") return std::nullopt;
            return 1;
        case PortRef::Kind::This:
            if (ref.port == "go" || ref.port == "done") return 1;
            for (const auto& port : c.inputs)
                if (port.name == ref.port) return port.width;
            for (const auto& port : c.outputs)
                if (port.name == ref.port) return port.width;
            return std::nullopt;
        case PortRef::Kind::Cell: {
            const Cell* cell = c.find_cell(ref.owner);
            if (!cell) return std::nullopt;
            if (cell->is_primitive()) {
                for (const auto& spec : primitive_ports(cell->primitive()))
                    if (spec.name == ref.port) return spec.width;
                return std::nullopt;
            }
            if (ref.port == "go" || ref.port == "done") return 1;
            const Component* sub = p.find(cell->component());
            if (!sub) return std::nullopt;
            for (const auto& port : sub->inputs)
                if (port.name == ref.port) return port.width;
            for (const auto& port : sub->outputs)
                if (port.name == ref.port) return port.width;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::optional<uint32_t> atom_width(const Program& p, const Component& c, const Atom& a) {
    if (const auto* ref = std::get_if<PortRef>(&a)) return port_width(p, c, *ref);
    return std::get<Literal>(a).width;
}

}  // namespace cyclometer::il
