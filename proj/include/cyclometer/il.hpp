#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cyclometer::il {

// Source position. Locations never participate in structural equality.
struct Location {
    int line = 0;
    int col = 0;
    friend bool operator==(const Location&, const Location&) { return true; }
};

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, Location loc);
    Location where() const { return loc_; }

  private:
    Location loc_;
};

// Attribute set, e.g. @external, @protected, @promotable(2), @id(7).
class Attributes {
  public:
    bool has(std::string_view key) const;
    std::optional<uint64_t> get(std::string_view key) const;
    void set(std::string key, std::optional<uint64_t> value = std::nullopt);
    void erase(std::string_view key);
    bool empty() const { return items_.empty(); }
    const std::map<std::string, std::optional<uint64_t>, std::less<>>& items() const { return items_; }

    bool operator==(const Attributes&) const = default;

  private:
    std::map<std::string, std::optional<uint64_t>, std::less<>> items_;
};

struct Port {
    std::string name;
    uint32_t width = 1;
    bool operator==(const Port&) const = default;
};

enum class PrimKind { Register, CombMemD1, Adder, Subtractor, Eq, Lt, SeqMult, Constant, Wire };

struct Primitive {
    PrimKind kind = PrimKind::Register;
    std::vector<uint64_t> params;

    uint32_t width() const { return params.empty() ? 0 : static_cast<uint32_t>(params[0]); }
    bool operator==(const Primitive&) const = default;
};

std::string_view primitive_name(PrimKind kind);
std::optional<PrimKind> primitive_from_name(std::string_view name);
// Number of parameters a primitive takes.
std::size_t primitive_arity(PrimKind kind);

enum class Direction { In, Out };

struct PortSpec {
    std::string name;
    uint32_t width;
    Direction dir;  // from the perspective of the cell
};

std::vector<PortSpec> primitive_ports(const Primitive& prim);
// The port that starts the primitive (write_en for memories/registers), if any.
std::optional<std::string> primitive_go_port(PrimKind kind);

struct Cell {
    std::string name;
    std::variant<Primitive, std::string> proto;  // primitive or user component name
    Attributes attrs;
    Location loc;

    bool is_primitive() const { return std::holds_alternative<Primitive>(proto); }
    const Primitive& primitive() const { return std::get<Primitive>(proto); }
    const std::string& component() const { return std::get<std::string>(proto); }
    bool operator==(const Cell&) const = default;
};

// `cell.port`, `group[go]` / `group[done]`, or a port of the enclosing component.
struct PortRef {
    enum class Kind { Cell, Hole, This };
    Kind kind = Kind::Cell;
    std::string owner;
    std::string port;

    static PortRef cell(std::string c, std::string p) { return {Kind::Cell, std::move(c), std::move(p)}; }
    static PortRef hole(std::string g, std::string p) { return {Kind::Hole, std::move(g), std::move(p)}; }
    static PortRef self(std::string p) { return {Kind::This, {}, std::move(p)}; }

    std::string str() const;
    bool operator==(const PortRef&) const = default;
    auto operator<=>(const PortRef&) const = default;
};

struct Literal {
    uint32_t width = 1;
    uint64_t value = 0;
    bool operator==(const Literal&) const = default;
};

using Atom = std::variant<PortRef, Literal>;
std::string atom_str(const Atom& a);

struct Guard {
    enum class Op { True, Atom, Not, And, Or, Eq, Neq };
    Op op = Op::True;
    il::Atom atom;             // Op::Atom, and the two sides of Eq/Neq via args
    std::vector<Guard> args;

    static Guard always() { return {}; }
    static Guard of(il::Atom a) { return {Op::Atom, std::move(a), {}}; }
    static Guard port(PortRef p) { return of(std::move(p)); }
    static Guard negate(Guard g);
    static Guard conj(Guard a, Guard b);
    static Guard disj(Guard a, Guard b);
    static Guard eq(il::Atom a, il::Atom b);
    static Guard neq(il::Atom a, il::Atom b);

    bool is_true() const { return op == Op::True; }
    // Every port reference that appears in the guard.
    void collect_ports(std::vector<PortRef>& out) const;
    bool operator==(const Guard&) const = default;
};

struct Assignment {
    PortRef dst;
    Guard guard;
    Atom src;
    Attributes attrs;
    Location loc;
    bool operator==(const Assignment&) const = default;
};

enum class GroupKind { Dynamic, Comb, Static };

struct Group {
    std::string name;
    GroupKind kind = GroupKind::Dynamic;
    uint32_t latency = 0;  // static groups only
    std::vector<Assignment> assigns;
    Attributes attrs;
    Location loc;

    // The `name[done] = ...` assignment, if present.
    const Assignment* done_assign() const;
    bool operator==(const Group&) const = default;
};

struct Control {
    enum class Kind { Empty, Enable, Seq, Par, If, While, StaticSeq, StaticPar };
    Kind kind = Kind::Empty;
    std::string group;                // Enable
    std::vector<Control> children;    // Seq/Par/Static*; If: {then, else}; While: {body}
    std::optional<PortRef> cond;      // If/While
    std::string with;                 // optional combinational group
    Attributes attrs;
    Location loc;

    static Control empty() { return {}; }
    static Control enable(std::string g);
    static Control seq(std::vector<Control> cs);
    static Control par(std::vector<Control> cs);
    static Control if_(PortRef cond, Control then, Control els, std::string with = {});
    static Control while_(PortRef cond, Control body, std::string with = {});

    bool is_static() const { return kind == Kind::StaticSeq || kind == Kind::StaticPar; }
    std::optional<uint64_t> id() const { return attrs.get("id"); }
    bool operator==(const Control&) const = default;
};

std::string_view control_kind_name(Control::Kind k);

struct Component {
    std::string name;
    std::vector<Port> inputs;
    std::vector<Port> outputs;
    std::vector<Cell> cells;
    std::vector<Group> groups;
    std::vector<Assignment> continuous;
    Control control;
    Attributes attrs;
    Location loc;

    const Cell* find_cell(std::string_view n) const;
    Cell* find_cell(std::string_view n);
    const Group* find_group(std::string_view n) const;
    Group* find_group(std::string_view n);
    bool operator==(const Component&) const = default;
};

struct Program {
    std::vector<Component> components;

    const Component* find(std::string_view n) const;
    Component* find(std::string_view n);
    const Component& main() const;
    bool operator==(const Program&) const = default;
};

struct ParseOptions {
    // Reject programs with duplicate names or width mismatches.
    bool check = true;
};

Program parse(std::string_view text, ParseOptions opts = {});

std::string print(const Program& p);
std::string print_guard(const Guard& g);
std::string print_control(const Control& c, int indent = 0);

enum class DiagKind {
    MissingMain,
    DuplicateName,
    UnknownComponent,
    CyclicInstantiation,
    BadParams,
    UnknownCell,
    UnknownGroup,
    UnknownPort,
    WidthMismatch,
    BadDestination,
    BadDone,
    BadCondition,
    BadWith,
};

std::string_view diag_kind_name(DiagKind k);

struct Diagnostic {
    DiagKind kind;
    std::string message;
    Location loc;
};

std::vector<Diagnostic> validate(const Program& p);

// Width of a port reference in the context of a component, or nullopt if it
// does not resolve.
std::optional<uint32_t> port_width(const Program& p, const Component& c, const PortRef& ref);
std::optional<uint32_t> atom_width(const Program& p, const Component& c, const Atom& a);

// Calls `fn` on every control node, pre-order.
template <typename Fn>
void walk(const Control& c, Fn&& fn) {
    fn(c);
    for (const auto& ch : c.children) walk(ch, fn);
}
template <typename Fn>
void walk_mut(Control& c, Fn&& fn) {
    fn(c);
    for (auto& ch : c.children) walk_mut(ch, fn);
}

}  // namespace cyclometer::il
