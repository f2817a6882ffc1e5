#include "cyclometer/il.hpp"

#include <sstream>

namespace cyclometer::il {

namespace {

std::string attrs_prefix(const Attributes& a) {
    std::string out;
    for (const auto& [k, v] : a.items()) {
        out += "@" + k;
        if (v) out += "(" + std::to_string(*v) + ")";
        out += " ";
    }
    return out;
}

int precedence(const Guard& g) {
    switch (g.op) {
        case Guard::Op::Or: return 1;
        case Guard::Op::And: return 2;
        default: return 3;
    }
}

void print_guard_into(std::string& out, const Guard& g) {
    auto child = [&](const Guard& c, int min_prec) {
        if (precedence(c) < min_prec) {
            out += "(";
            print_guard_into(out, c);
            out += ")";
        } else {
            print_guard_into(out, c);
        }
    };
    switch (g.op) {
        case Guard::Op::True:
            out += "1'd1";
            break;
        case Guard::Op::Atom:
            out += atom_str(g.atom);
            break;
        case Guard::Op::Not:
            out += "!";
            if (g.args[0].op == Guard::Op::Atom || g.args[0].op == Guard::Op::Not) {
                print_guard_into(out, g.args[0]);
            } else {
                out += "(";
                print_guard_into(out, g.args[0]);
                out += ")";
            }
            break;
        case Guard::Op::And:
            child(g.args[0], 2);
            out += " & ";
            child(g.args[1], 3);
            break;
        case Guard::Op::Or:
            child(g.args[0], 1);
            out += " | ";
            child(g.args[1], 2);
            break;
        case Guard::Op::Eq:
        case Guard::Op::Neq:
            out += atom_str(g.args[0].atom);
            out += g.op == Guard::Op::Eq ? " == " : " != ";
            out += atom_str(g.args[1].atom);
            break;
    }
}

void print_assignment(std::ostringstream& os, const Assignment& a, const std::string& pad) {
    os << pad << attrs_prefix(a.attrs) << a.dst.str() << " = ";
    if (!a.guard.is_true()) os << print_guard(a.guard) << " ? ";
    os << atom_str(a.src) << ";\n";
}

void print_block(std::ostringstream& os, const Control& c, int indent);

void print_stmt(std::ostringstream& os, const Control& c, int indent) {
    const std::string pad(indent * 2, ' ');
    os << pad << attrs_prefix(c.attrs);
    switch (c.kind) {
        case Control::Kind::Empty:
            os << "empty;\n";
            return;
        case Control::Kind::Enable:
            os << c.group << ";\n";
            return;
        case Control::Kind::Seq:
        case Control::Kind::Par:
        case Control::Kind::StaticSeq:
        case Control::Kind::StaticPar: {
            if (c.is_static()) os << "static ";
            os << (c.kind == Control::Kind::Seq || c.kind == Control::Kind::StaticSeq ? "seq" : "par") << " {\n";
            for (const auto& ch : c.children) print_stmt(os, ch, indent + 1);
            os << pad << "}\n";
            return;
        }
        case Control::Kind::If:
            os << "if " << c.cond->str();
            if (!c.with.empty()) os << " with " << c.with;
            os << " ";
            print_block(os, c.children[0], indent);
            if (c.children[1].kind != Control::Kind::Empty || !c.children[1].attrs.empty()) {
                os << pad << "else ";
                print_block(os, c.children[1], indent);
            }
            return;
        case Control::Kind::While:
            os << "while " << c.cond->str();
            if (!c.with.empty()) os << " with " << c.with;
            os << " ";
            print_block(os, c.children[0], indent);
            return;
    }
}

// Prints `{ ... }` followed by a newline; the opening brace continues the current line.
void print_block(std::ostringstream& os, const Control& c, int indent) {
    const std::string pad(indent * 2, ' ');
    if (c.kind == Control::Kind::Empty && c.attrs.empty()) {
        os << "{ }\n";
        return;
    }
    os << "{\n";
    if (c.kind == Control::Kind::Empty) {
        os << std::string((indent + 1) * 2, ' ') << attrs_prefix(c.attrs) << "empty;\n";
    } else {
        print_stmt(os, c, indent + 1);
    }
    os << pad << "}\n";
}

void print_ports(std::ostringstream& os, const std::vector<Port>& ports) {
    os << "(";
    for (std::size_t i = 0; i < ports.size(); ++i) {
        if (i) os << ", ";
        os << ports[i].name << ": " << ports[i].width;
    }
    os << ")";
}

}  // namespace

std::string print_guard(const Guard& g) {
    std::string out;
    print_guard_into(out, g);
    return out;
}

std::string print_control(const Control& c, int indent) {
    std::ostringstream os;
    print_stmt(os, c, indent);
    return os.str();
}

std::string print(const Program& p) {
    std::ostringstream os;
    bool first = true;
    for (const auto& c : p.components) {
        if (!first) os << "\n";
        first = false;
        os << attrs_prefix(c.attrs) << "component " << c.name;
        print_ports(os, c.inputs);
        os << " -> ";
        print_ports(os, c.outputs);
        os << " {\n  cells {\n";
        for (const auto& cell : c.cells) {
            os << "    " << attrs_prefix(cell.attrs) << cell.name << " = ";
            if (cell.is_primitive()) {
                const auto& prim = cell.primitive();
                os << primitive_name(prim.kind) << "(";
                for (std::size_t i = 0; i < prim.params.size(); ++i) {
                    if (i) os << ", ";
                    os << prim.params[i];
                }
                os << ");\n";
            } else {
                os << cell.component() << "();\n";
            }
        }
        os << "  }\n  wires {\n";
        for (const auto& g : c.groups) {
            os << "    " << attrs_prefix(g.attrs);
            if (g.kind == GroupKind::Comb) os << "comb ";
            if (g.kind == GroupKind::Static) os << "static<" << g.latency << "> ";
            os << "group " << g.name << " {\n";
            for (const auto& a : g.assigns) print_assignment(os, a, "      ");
            os << "    }\n";
        }
        for (const auto& a : c.continuous) print_assignment(os, a, "    ");
        os << "  }\n  control ";
        print_block(os, c.control, 1);
        os << "}\n";
    }
    return os.str();
}

}  // namespace cyclometer::il
