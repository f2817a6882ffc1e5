#include "util.hpp"

#include "json.hpp"

namespace cyclometer::passes {

using json = nlohmann::json;
using namespace detail;

std::string_view comp_kind_name(CompKind k) {
    switch (k) {
        case CompKind::Tdcc: return "tdcc";
        case CompKind::Par: return "par";
        case CompKind::Region: return "region";
        case CompKind::Static: return "static";
        case CompKind::StaticEnable: return "static_enable";
    }
    return "?";
}

std::optional<CompKind> comp_kind_from_name(std::string_view s) {
    for (CompKind k : {CompKind::Tdcc, CompKind::Par, CompKind::Region, CompKind::Static, CompKind::StaticEnable})
        if (comp_kind_name(k) == s) return k;
    return std::nullopt;
}

std::string_view register_kind_name(RegisterKind k) {
    switch (k) {
        case RegisterKind::Fsm: return "fsm";
        case RegisterKind::Pd: return "pd";
        case RegisterKind::Counter: return "counter";
    }
    return "?";
}

std::optional<CompKind> compilation_kind(const il::Group& g) {
    if (g.attrs.has(attr::kTdcc)) return CompKind::Tdcc;
    if (g.attrs.has(attr::kPar)) return CompKind::Par;
    if (g.attrs.has(attr::kRegion)) return CompKind::Region;
    if (g.attrs.has(attr::kStatic)) return CompKind::Static;
    if (g.attrs.has(attr::kStaticEnable)) return CompKind::StaticEnable;
    return std::nullopt;
}

const CompilationGroup* SourceMap::find_group(std::string_view component, std::string_view group) const {
    auto it = control_groups.find(std::string(component) + "." + std::string(group));
    return it == control_groups.end() ? nullptr : &it->second;
}

std::map<std::string, std::string> cell_tree(const il::Program& p) {
    std::map<std::string, std::string> out;
    auto visit = [&](auto&& self, const il::Component& c, const std::string& path) -> void {
        out[path] = c.name;
        for (const auto& cell : c.cells) {
            if (cell.is_primitive()) continue;
            if (const il::Component* sub = p.find(cell.component())) self(self, *sub, path + "." + cell.name);
        }
    };
    if (const il::Component* m = p.find("main")) visit(visit, *m, "main");
    return out;
}

std::vector<ControlBlock> control_blocks(const il::Component& c) {
    std::vector<ControlBlock> out;
    auto segment = [&](const il::Control& n) {
        if (n.kind != il::Control::Kind::Enable) return std::string(il::control_kind_name(n.kind));
        const il::Group* g = c.find_group(n.group);
        if (g)
            if (auto callee = wrapper_callee(*g)) return *callee;
        return n.group;
    };
    auto visit = [&](auto&& self, const il::Control& n, const std::string& path, std::optional<uint64_t> parent,
                     std::optional<uint64_t> arm) -> void {
        auto id = n.id();
        if (id) {
            ControlBlock b;
            b.id = *id;
            b.kind = std::string(il::control_kind_name(n.kind));
            b.path = path;
            b.parent = parent;
            b.par_arm = arm;
            if (n.kind == il::Control::Kind::Enable) {
                b.group = n.group;
                b.callee = segment(n);
            }
            out.push_back(std::move(b));
        }
        const bool is_par = n.kind == il::Control::Kind::Par || n.kind == il::Control::Kind::StaticPar;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            const auto& ch = n.children[i];
            self(self, ch, path + "/" + std::to_string(i) + "/" + segment(ch), id ? id : parent,
                 is_par ? std::optional<uint64_t>(i) : std::nullopt);
        }
    };
    visit(visit, c.control, c.name + "/" + segment(c.control), std::nullopt, std::nullopt);
    return out;
}

namespace {

json opt_json(const std::optional<uint64_t>& v) { return v ? json(*v) : json(nullptr); }

std::optional<uint64_t> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<uint64_t>();
}

}  // namespace

std::string serialize(const SourceMap& m) {
    json j;
    j["program"] = m.program;
    j["probes"] = json::array();
    for (const auto& p : m.probes)
        j["probes"].push_back({{"name", p.name()},
                               {"kind", probe_kind_name(p.kind)},
                               {"component", p.component},
                               {"parent", p.parent},
                               {"child", p.child}});
    j["control_groups"] = json::object();
    for (const auto& [key, g] : m.control_groups)
        j["control_groups"][key] = {{"component", g.component},
                                    {"group", g.group},
                                    {"kind", comp_kind_name(g.kind)},
                                    {"id", g.control.id},
                                    {"path", g.control.path}};
    j["control_registers"] = json::array();
    for (const auto& r : m.control_registers)
        j["control_registers"].push_back({{"component", r.component},
                                          {"name", r.name},
                                          {"kind", register_kind_name(r.kind)},
                                          {"group", r.group},
                                          {"update_states", r.update_states}});
    j["cell_tree"] = m.cell_tree;
    j["control_blocks"] = json::object();
    for (const auto& [comp, blocks] : m.control_blocks) {
        json arr = json::array();
        for (const auto& b : blocks)
            arr.push_back({{"id", b.id},
                           {"kind", b.kind},
                           {"path", b.path},
                           {"parent", opt_json(b.parent)},
                           {"par_arm", opt_json(b.par_arm)},
                           {"group", b.group},
                           {"callee", b.callee}});
        j["control_blocks"][comp] = std::move(arr);
    }
    return j.dump(2) + "\n";
}

SourceMap parse_source_map(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw PassError(std::string("malformed source map: ") + e.what());
    }
    try {
        SourceMap m;
        m.program = j.value("program", "");
        for (const auto& p : j.at("probes")) {
            Probe probe;
            std::string kind = p.at("kind");
            bool found = false;
            for (ProbeKind k : {ProbeKind::GA, ProbeKind::CG, ProbeKind::CC, ProbeKind::CP})
                if (probe_kind_name(k) == kind) {
                    probe.kind = k;
                    found = true;
                }
            if (!found) throw PassError("unknown probe kind '" + kind + "'");
            probe.component = p.at("component");
            probe.parent = p.at("parent");
            probe.child = p.at("child");
            m.probes.push_back(std::move(probe));
        }
        for (const auto& [key, g] : j.at("control_groups").items()) {
            CompilationGroup cg;
            cg.component = g.at("component");
            cg.group = g.at("group");
            auto kind = comp_kind_from_name(g.at("kind").get<std::string>());
            if (!kind) throw PassError("unknown control group kind in source map");
            cg.kind = *kind;
            cg.control = ControlId{cg.component, g.at("id").get<uint64_t>(), g.at("path")};
            m.control_groups[key] = std::move(cg);
        }
        for (const auto& r : j.at("control_registers")) {
            ControlRegister reg;
            reg.component = r.at("component");
            reg.name = r.at("name");
            std::string kind = r.at("kind");
            if (kind == "fsm")
                reg.kind = RegisterKind::Fsm;
            else if (kind == "pd")
                reg.kind = RegisterKind::Pd;
            else if (kind == "counter")
                reg.kind = RegisterKind::Counter;
            else
                throw PassError("unknown register kind '" + kind + "'");
            reg.group = r.at("group");
            reg.update_states = r.at("update_states").get<std::vector<uint64_t>>();
            m.control_registers.push_back(std::move(reg));
        }
        m.cell_tree = j.at("cell_tree").get<std::map<std::string, std::string>>();
        if (j.contains("control_blocks")) {
            for (const auto& [comp, arr] : j.at("control_blocks").items()) {
                auto& blocks = m.control_blocks[comp];
                for (const auto& b : arr) {
                    ControlBlock cb;
                    cb.id = b.at("id");
                    cb.kind = b.at("kind");
                    cb.path = b.at("path");
                    cb.parent = opt_from(b, "parent");
                    cb.par_arm = opt_from(b, "par_arm");
                    cb.group = b.value("group", "");
                    cb.callee = b.value("callee", "");
                    blocks.push_back(std::move(cb));
                }
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw PassError(std::string("malformed source map: ") + e.what());
    }
}

}  // namespace cyclometer::passes
