#include "cyclometer/il.hpp"

#include <cctype>
#include <charconv>

namespace cyclometer::il {

namespace {

enum class Tok { Ident, Int, Literal, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    uint64_t value = 0;
    uint32_t width = 0;
    Location loc;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t;
            t.loc = {line_, col_};
            if (pos_ >= src_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                t.kind = Tok::Ident;
                t.text = std::string(src_.substr(start, pos_ - start));
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                uint64_t first = read_int(t.loc);
                if (pos_ + 1 < src_.size() && src_[pos_] == '\'' && src_[pos_ + 1] == 'd') {
                    advance();
                    advance();
                    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        throw ParseError("expected digits after 'd", {line_, col_});
                    t.kind = Tok::Literal;
                    t.width = static_cast<uint32_t>(first);
                    t.value = read_int(t.loc);
                } else {
                    t.kind = Tok::Int;
                    t.value = first;
                }
            } else {
                t.kind = Tok::Punct;
                static constexpr std::string_view two[] = {"==", "!=", "->"};
                bool matched = false;
                for (auto op : two) {
                    if (src_.substr(pos_, 2) == op) {
                        t.text = std::string(op);
                        advance();
                        advance();
                        matched = true;
                        break;
                    }
                }
                if (!matched) {
                    static constexpr std::string_view single = "{}()[];,.=?!&|@:<>";
                    if (single.find(c) == std::string_view::npos)
                        throw ParseError(std::string("unexpected character '") + c + "'", t.loc);
                    t.text = std::string(1, c);
                    advance();
                }
            }
            out.push_back(std::move(t));
        }
    }

  private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (src_.substr(pos_, 2) == "//") {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (src_.substr(pos_, 2) == "/*") {
                Location at{line_, col_};
                advance();
                advance();
                while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
                if (pos_ >= src_.size()) throw ParseError("unterminated comment", at);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    uint64_t read_int(Location at) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        uint64_t v = 0;
        auto s = src_.substr(start, pos_ - start);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc()) throw ParseError("integer out of range", at);
        return v;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_keyword(std::string_view s) {
    static constexpr std::string_view kws[] = {"component", "cells", "wires", "control", "group", "comb", "static",
                                               "seq",       "par",   "if",    "else",    "while", "with", "empty"};
    for (auto k : kws)
        if (k == s) return true;
    return false;
}

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program() {
        Program p;
        while (peek().kind != Tok::End) p.components.push_back(component());
        return p;
    }

  private:
    const Token& peek(std::size_t k = 0) const {
        std::size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    Token next() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool at_punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).kind == Tok::Punct && peek(k).text == p;
    }
    bool at_kw(std::string_view kw, std::size_t k = 0) const {
        return peek(k).kind == Tok::Ident && peek(k).text == kw;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const auto& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        if (t.kind == Tok::Int || t.kind == Tok::Literal) found = "number";
        throw ParseError("expected " + what + ", found " + found, t.loc);
    }
    void expect(std::string_view p) {
        if (!at_punct(p)) fail("'" + std::string(p) + "'");
        next();
    }
    void expect_kw(std::string_view kw) {
        if (!at_kw(kw)) fail("'" + std::string(kw) + "'");
        next();
    }
    std::string ident(const char* what = "identifier") {
        if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail(what);
        return next().text;
    }
    uint64_t integer() {
        if (peek().kind != Tok::Int) fail("integer");
        return next().value;
    }

    Attributes attributes() {
        Attributes a;
        while (at_punct("@")) {
            next();
            // Attribute names may coincide with keywords, as in @par or @static.
            if (peek().kind != Tok::Ident) fail("attribute name");
            std::string key = next().text;
            std::optional<uint64_t> v;
            if (at_punct("(")) {
                next();
                v = integer();
                expect(")");
            }
            a.set(std::move(key), v);
        }
        return a;
    }

    std::vector<Port> ports() {
        std::vector<Port> out;
        expect("(");
        while (!at_punct(")")) {
            Port p;
            p.name = ident("port name");
            expect(":");
            p.width = static_cast<uint32_t>(integer());
            out.push_back(std::move(p));
            if (!at_punct(")")) expect(",");
        }
        expect(")");
        return out;
    }

    Component component() {
        Component c;
        c.attrs = attributes();
        c.loc = peek().loc;
        expect_kw("component");
        c.name = ident("component name");
        c.inputs = ports();
        expect("->");
        c.outputs = ports();
        expect("{");

        expect_kw("cells");
        expect("{");
        while (!at_punct("}")) c.cells.push_back(cell());
        expect("}");

        expect_kw("wires");
        expect("{");
        while (!at_punct("}")) {
            Attributes attrs = attributes();
            if (at_kw("group") || at_kw("comb") || at_kw("static")) {
                c.groups.push_back(group(std::move(attrs)));
            } else {
                c.continuous.push_back(assignment(std::move(attrs)));
            }
        }
        expect("}");

        expect_kw("control");
        Location at = peek().loc;
        c.control = block();
        c.control.loc = at;
        expect("}");
        return c;
    }

    Cell cell() {
        Cell c;
        c.attrs = attributes();
        c.loc = peek().loc;
        c.name = ident("cell name");
        expect("=");
        Location proto_loc = peek().loc;
        std::string proto = ident("cell prototype");
        expect("(");
        std::vector<uint64_t> params;
        while (!at_punct(")")) {
            params.push_back(integer());
            if (!at_punct(")")) expect(",");
        }
        expect(")");
        expect(";");
        if (auto kind = primitive_from_name(proto)) {
            if (params.size() != primitive_arity(*kind))
                throw ParseError(proto + " takes " + std::to_string(primitive_arity(*kind)) + " parameter(s)",
                                 proto_loc);
            c.proto = Primitive{*kind, std::move(params)};
        } else {
            if (!params.empty()) throw ParseError("component instances take no parameters", proto_loc);
            c.proto = std::move(proto);
        }
        return c;
    }

    Group group(Attributes attrs) {
        Group g;
        g.attrs = std::move(attrs);
        g.loc = peek().loc;
        if (at_kw("comb")) {
            next();
            g.kind = GroupKind::Comb;
        } else if (at_kw("static")) {
            next();
            expect("<");
            g.kind = GroupKind::Static;
            g.latency = static_cast<uint32_t>(integer());
            expect(">");
        }
        expect_kw("group");
        g.name = ident("group name");
        expect("{");
        while (!at_punct("}")) g.assigns.push_back(assignment(attributes()));
        expect("}");
        return g;
    }

    PortRef port_ref() {
        std::string first = ident("port");
        if (at_punct(".")) {
            next();
            return PortRef::cell(std::move(first), ident("port name"));
        }
        if (at_punct("[")) {
            next();
            std::string hole = ident("hole name");
            expect("]");
            return PortRef::hole(std::move(first), std::move(hole));
        }
        return PortRef::self(std::move(first));
    }

    Atom atom() {
        if (peek().kind == Tok::Literal) {
            Token t = next();
            return Literal{t.width, t.value};
        }
        return port_ref();
    }

    Guard guard_or() {
        Guard g = guard_and();
        while (at_punct("|")) {
            next();
            Guard r;
            r.op = Guard::Op::Or;
            r.args.push_back(std::move(g));
            r.args.push_back(guard_and());
            g = std::move(r);
        }
        return g;
    }

    Guard guard_and() {
        Guard g = guard_unary();
        while (at_punct("&")) {
            next();
            Guard r;
            r.op = Guard::Op::And;
            r.args.push_back(std::move(g));
            r.args.push_back(guard_unary());
            g = std::move(r);
        }
        return g;
    }

    Guard guard_unary() {
        if (at_punct("!")) {
            next();
            return Guard::negate(guard_unary());
        }
        if (at_punct("(")) {
            next();
            Guard g = guard_or();
            expect(")");
            return g;
        }
        Atom lhs = atom();
        if (at_punct("==") || at_punct("!=")) {
            bool eq = next().text == "==";
            Atom rhs = atom();
            return eq ? Guard::eq(std::move(lhs), std::move(rhs)) : Guard::neq(std::move(lhs), std::move(rhs));
        }
        return Guard::of(std::move(lhs));
    }

    Assignment assignment(Attributes attrs) {
        Assignment a;
        a.attrs = std::move(attrs);
        a.loc = peek().loc;
        a.dst = port_ref();
        expect("=");
        Guard g = guard_or();
        if (at_punct("?")) {
            next();
            a.guard = std::move(g);
            a.src = atom();
        } else {
            if (g.op != Guard::Op::Atom) fail("'?' after guard");
            a.src = std::move(g.atom);
        }
        expect(";");
        return a;
    }

    // `{ stmt* }`: empty, a single statement, or an implicit seq.
    Control block() {
        expect("{");
        std::vector<Control> stmts;
        while (!at_punct("}")) stmts.push_back(statement());
        expect("}");
        if (stmts.empty()) return Control::empty();
        if (stmts.size() == 1) return std::move(stmts.front());
        return Control::seq(std::move(stmts));
    }

    std::vector<Control> stmt_list() {
        expect("{");
        std::vector<Control> stmts;
        while (!at_punct("}")) stmts.push_back(statement());
        expect("}");
        return stmts;
    }

    Control statement() {
        Attributes attrs = attributes();
        Location at = peek().loc;
        Control c;
        if (at_kw("seq")) {
            next();
            c = Control::seq(stmt_list());
        } else if (at_kw("par")) {
            next();
            c = Control::par(stmt_list());
        } else if (at_kw("static")) {
            next();
            if (at_kw("seq")) {
                next();
                c = Control::seq(stmt_list());
                c.kind = Control::Kind::StaticSeq;
            } else if (at_kw("par")) {
                next();
                c = Control::par(stmt_list());
                c.kind = Control::Kind::StaticPar;
            } else {
                fail("'seq' or 'par' after 'static'");
            }
        } else if (at_kw("if")) {
            c = if_statement();
        } else if (at_kw("while")) {
            next();
            PortRef cond = port_ref();
            std::string with;
            if (at_kw("with")) {
                next();
                with = ident("group name");
            }
            c = Control::while_(std::move(cond), block(), std::move(with));
        } else if (at_kw("empty")) {
            next();
            expect(";");
        } else {
            c = Control::enable(ident("control statement"));
            expect(";");
        }
        c.attrs = std::move(attrs);
        c.loc = at;
        return c;
    }

    Control if_statement() {
        expect_kw("if");
        PortRef cond = port_ref();
        std::string with;
        if (at_kw("with")) {
            next();
            with = ident("group name");
        }
        Control then = block();
        Control els;
        if (at_kw("else")) {
            next();
            if (at_kw("if") || at_punct("@")) {
                Attributes attrs = attributes();
                Location at = peek().loc;
                els = if_statement();
                els.attrs = std::move(attrs);
                els.loc = at;
            } else {
                els = block();
            }
        }
        return Control::if_(std::move(cond), std::move(then), std::move(els), std::move(with));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Program parse(std::string_view text, ParseOptions opts) {
    Program p = Parser(Lexer(text).run()).program();
    if (opts.check) {
        for (const auto& d : validate(p)) {
            if (d.kind == DiagKind::DuplicateName || d.kind == DiagKind::WidthMismatch)
                throw ParseError(d.message, d.loc);
        }
    }
    return p;
}

}  // namespace cyclometer::il
