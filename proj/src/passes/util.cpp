#include "util.hpp"

#include <bit>

namespace cyclometer::passes::detail {

std::string fresh_name(const il::Component& c, const std::string& base) {
    auto used = [&](const std::string& n) { return c.find_cell(n) || c.find_group(n); };
    if (!used(base)) return base;
    for (int i = 1;; ++i) {
        std::string n = base + "_" + std::to_string(i);
        if (!used(n)) return n;
    }
}

il::Literal lit(uint32_t width, uint64_t value) { return il::Literal{width, value}; }

uint32_t bits_for(uint64_t max_value) {
    return std::max<uint32_t>(1, static_cast<uint32_t>(std::bit_width(max_value)));
}

il::Assignment assign(il::PortRef dst, il::Atom src, il::Guard guard) {
    il::Assignment a;
    a.dst = std::move(dst);
    a.src = std::move(src);
    a.guard = std::move(guard);
    return a;
}

il::Guard any_of(const std::vector<il::Guard>& gs) {
    if (gs.empty()) return il::Guard::of(lit(1, 0));
    il::Guard r = gs[0];
    for (std::size_t i = 1; i < gs.size(); ++i) r = il::Guard::disj(std::move(r), gs[i]);
    return r;
}

il::Guard all_of(const std::vector<il::Guard>& gs) {
    il::Guard r = il::Guard::always();
    for (const auto& g : gs) r = il::Guard::conj(std::move(r), g);
    return r;
}

il::Cell make_cell(std::string name, il::PrimKind kind, std::vector<uint64_t> params) {
    il::Cell c;
    c.name = std::move(name);
    c.proto = il::Primitive{kind, std::move(params)};
    return c;
}

std::optional<std::string> wrapper_callee(const il::Group& g) {
    if (!g.attrs.has(attr::kWrapper)) return std::nullopt;
    for (const auto& a : g.assigns)
        if (a.dst.kind == il::PortRef::Kind::Hole && a.dst.port == "go") return a.dst.owner;
    return std::nullopt;
}

uint64_t next_id(const il::Control& root) {
    uint64_t m = 0;
    bool any = false;
    il::walk(root, [&](const il::Control& n) {
        if (auto id = n.id()) {
            m = any ? std::max(m, *id) : *id;
            any = true;
        }
    });
    return any ? m + 1 : 0;
}

void ensure_ids(il::Control& root) {
    uint64_t next = next_id(root);
    bool is_root = true;
    il::walk_mut(root, [&](il::Control& n) {
        if (!n.id() && (n.kind != il::Control::Kind::Empty || is_root)) n.attrs.set(std::string(attr::kId), next++);
        is_root = false;
    });
}

}  // namespace cyclometer::passes::detail
