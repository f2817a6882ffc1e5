#include "cyclometer/trace.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cyclometer::trace {

namespace {

struct CompInfo {
    std::map<uint64_t, const passes::ControlBlock*> blocks;
    std::map<std::string, const passes::ControlBlock*> site_of;  // enabled group -> enable block
    std::set<std::string> wrappers;
    std::map<uint64_t, std::string> block_group;  // control id -> compilation group (non-transparent)
    std::vector<const passes::Probe*> ga, cg, cc, cp;
};

struct InstSignals {
    std::string path;
    const CompInfo* info = nullptr;
    std::size_t go = 0;
    std::vector<std::pair<uint64_t, std::size_t>> control;  // (block id, go signal)
    std::vector<std::pair<const passes::Probe*, std::size_t>> ga, cg, cc, cp;
};

std::size_t require(const sim::SignalTrace& t, const std::string& name) {
    auto i = t.find(name);
    if (!i) throw TraceError("trace has no signal '" + name + "' required by the source map");
    return *i;
}

}  // namespace

ProfileTrace reconstruct(const sim::SignalTrace& t, const passes::SourceMap& m) {
    std::map<std::string, CompInfo> comps;
    for (const auto& [comp, blocks] : m.control_blocks) {
        CompInfo& ci = comps[comp];
        for (const auto& b : blocks) {
            ci.blocks[b.id] = &b;
            if (b.kind == "enable") {
                ci.site_of.emplace(b.group, &b);
                if (b.group != b.callee) ci.wrappers.insert(b.group);
            }
        }
    }
    for (const auto& [key, cg] : m.control_groups)
        if (cg.kind != passes::CompKind::StaticEnable) comps[cg.component].block_group[cg.control.id] = cg.group;
    for (const auto& p : m.probes) {
        CompInfo& ci = comps[p.component];
        switch (p.kind) {
            case passes::ProbeKind::GA: ci.ga.push_back(&p); break;
            case passes::ProbeKind::CG: ci.cg.push_back(&p); break;
            case passes::ProbeKind::CC: ci.cc.push_back(&p); break;
            case passes::ProbeKind::CP: ci.cp.push_back(&p); break;
        }
    }

    std::vector<InstSignals> insts;
    for (const auto& [path, comp] : m.cell_tree) {
        InstSignals s;
        s.path = path;
        s.info = &comps[comp];
        s.go = require(t, path + ".go");
        for (const auto& [id, group] : s.info->block_group) s.control.emplace_back(id, require(t, path + "." + group + ".go"));
        auto probes = [&](const std::vector<const passes::Probe*>& from, auto& into) {
            for (const auto* p : from) into.emplace_back(p, require(t, path + "." + p->name() + ".out"));
        };
        probes(s.info->ga, s.ga);
        probes(s.info->cg, s.cg);
        probes(s.info->cc, s.cc);
        probes(s.info->cp, s.cp);
        insts.push_back(std::move(s));
    }

    ProfileTrace pt;
    pt.cycle_count = t.cycle_count;
    pt.map = m;
    pt.trees.reserve(t.cycle_count);
    for (uint64_t cycle = 0; cycle < t.cycle_count; ++cycle) {
        CallTree tree;
        tree.nodes.insert(Node::cell("main"));
        auto fail = [&](const std::string& msg) {
            throw TraceError("cycle " + std::to_string(cycle) + ": " + msg);
        };
        for (const auto& s : insts) {
            const bool cell_active = t.value(s.go, cycle) != 0;
            std::set<uint64_t> active_blocks;
            for (const auto& [id, sig] : s.control)
                if (t.value(sig, cycle)) active_blocks.insert(id);
            std::set<std::string> active_groups;
            for (const auto& [p, sig] : s.ga)
                if (t.value(sig, cycle)) active_groups.insert(p->parent);
            if (!cell_active) {
                if (!active_groups.empty())
                    fail("group '" + *active_groups.begin() + "' is active in inactive cell " + s.path);
                if (!active_blocks.empty()) fail("control is active in inactive cell " + s.path);
                continue;
            }
            tree.nodes.insert(Node::cell(s.path));

            // Nearest active ancestor block, starting at `from`.
            auto attach = [&](std::optional<uint64_t> from) -> Node {
                while (from) {
                    if (active_blocks.count(*from)) return Node::control(s.path, *from);
                    auto it = s.info->blocks.find(*from);
                    if (it == s.info->blocks.end()) break;
                    from = it->second->parent;
                }
                return Node::cell(s.path);
            };

            for (uint64_t id : active_blocks) {
                auto it = s.info->blocks.find(id);
                std::optional<uint64_t> parent = it == s.info->blocks.end() ? std::nullopt : it->second->parent;
                tree.add_edge(attach(parent), Node::control(s.path, id));
            }

            std::map<std::string, std::string> caller;  // child group -> calling group
            for (const auto& [p, sig] : s.cg) {
                if (!t.value(sig, cycle)) continue;
                if (!active_groups.count(p->parent)) fail("call probe " + p->name() + " is high outside its group");
                caller[p->child] = p->parent;
            }
            // Parent node of an active group, looking through wrappers.
            auto parent_of = [&](std::string g) -> Node {
                for (int depth = 0; depth < 64; ++depth) {
                    auto c = caller.find(g);
                    if (c != caller.end()) {
                        if (!s.info->wrappers.count(c->second)) return Node::group(s.path, c->second);
                        g = c->second;
                        continue;
                    }
                    auto site = s.info->site_of.find(g);
                    if (site == s.info->site_of.end())
                        fail("group '" + g + "' in " + s.path + " is active but has no active caller or enable site");
                    return attach(site->second->parent);
                }
                fail("wrapper chain too deep for group '" + g + "'");
                return Node::cell(s.path);
            };
            for (const auto& g : active_groups) {
                if (s.info->wrappers.count(g)) continue;
                tree.add_edge(parent_of(g), Node::group(s.path, g));
            }
            for (const auto& [p, sig] : s.cp) {
                if (!t.value(sig, cycle)) continue;
                tree.add_edge(Node::group(s.path, p->parent), Node::primitive(s.path, p->child));
            }
            for (const auto& [p, sig] : s.cc) {
                if (!t.value(sig, cycle)) continue;
                tree.add_edge(Node::group(s.path, p->parent), Node::cell(s.path + "." + p->child));
            }
        }
        auto problems = check_tree_rules(tree);
        if (!problems.empty()) fail("malformed call tree: " + problems.front());
        pt.trees.push_back(std::move(tree));
    }
    return pt;
}

std::vector<std::string> check_tree_rules(const CallTree& tree) {
    std::vector<std::string> out;
    const Node root = Node::cell("main");
    if (!tree.nodes.count(root)) out.push_back("root main cell is missing");
    std::map<Node, std::vector<Node>> parents, children;
    for (const auto& [p, c] : tree.edges) {
        if (!tree.nodes.count(p) || !tree.nodes.count(c)) out.push_back("edge references an unknown node");
        parents[c].push_back(p);
        children[p].push_back(c);
    }
    for (const auto& n : tree.nodes) {
        const auto& ps = parents[n];
        if (n == root) {
            if (!ps.empty()) out.push_back("main has a parent");
            continue;
        }
        if (ps.size() != 1) {
            out.push_back(n.str() + " has " + std::to_string(ps.size()) + " parents");
            continue;
        }
        const Node& p = ps[0];
        switch (n.kind) {
            case NodeKind::Cell:
                if (p.kind != NodeKind::Group) out.push_back("cell " + n.str() + " has non-group parent " + p.str());
                break;
            case NodeKind::Control:
                if (p.kind != NodeKind::Cell && p.kind != NodeKind::Control)
                    out.push_back("control block " + n.str() + " has parent " + p.str());
                break;
            case NodeKind::Primitive:
                if (p.kind != NodeKind::Group) out.push_back("primitive " + n.str() + " has non-group parent " + p.str());
                break;
            case NodeKind::Group:
                break;
        }
        if (n.kind == NodeKind::Primitive && !children[n].empty()) out.push_back("primitive " + n.str() + " has children");
    }
    // Connectivity from the root (also rules out cycles given single parents).
    std::set<Node> seen;
    std::vector<Node> stack{root};
    while (!stack.empty()) {
        Node n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        for (const auto& c : children[n]) stack.push_back(c);
    }
    for (const auto& n : tree.nodes)
        if (!seen.count(n)) out.push_back(n.str() + " is not reachable from main");
    return out;
}

std::vector<Node> path_to(const CallTree& tree, const Node& n) {
    if (!tree.nodes.count(n)) return {};
    std::map<Node, Node> parent;
    for (const auto& [p, c] : tree.edges) parent.emplace(c, p);
    std::vector<Node> path{n};
    for (std::size_t guard = 0; guard <= tree.nodes.size(); ++guard) {
        auto it = parent.find(path.back());
        if (it == parent.end()) break;
        path.push_back(it->second);
    }
    return {path.rbegin(), path.rend()};
}

OverheadReport overhead(const ProfileTrace& pt) {
    std::map<std::string, CellOverhead> cells;
    for (const auto& tree : pt.trees) {
        std::set<std::string> active, user;
        for (const auto& n : tree.nodes) {
            if (n.kind == NodeKind::Cell) active.insert(n.instance);
            if (n.kind != NodeKind::Group) continue;
            // A user group counts for its own cell and every enclosing one.
            std::string inst = n.instance;
            for (;;) {
                user.insert(inst);
                auto dot = inst.rfind('.');
                if (dot == std::string::npos) break;
                inst = inst.substr(0, dot);
            }
        }
        for (const auto& c : active) {
            auto& e = cells[c];
            e.cell = c;
            ++e.active;
            if (user.count(c)) ++e.user;
        }
    }
    OverheadReport r;
    for (auto& [path, e] : cells) {
        e.control = e.active - e.user;
        r.cells.push_back(e);
    }
    auto main = cells.find("main");
    if (main != cells.end()) {
        r.active = main->second.active;
        r.user = main->second.user;
        r.control = main->second.control;
    }
    return r;
}

std::string thread_key(const std::vector<Node>& path, const passes::SourceMap& m) {
    std::string key;
    auto comp_of = [&](const std::string& inst) -> const std::vector<passes::ControlBlock>* {
        auto c = m.cell_tree.find(inst);
        if (c == m.cell_tree.end()) return nullptr;
        auto b = m.control_blocks.find(c->second);
        return b == m.control_blocks.end() ? nullptr : &b->second;
    };
    auto find_block = [](const std::vector<passes::ControlBlock>& bs, uint64_t id) -> const passes::ControlBlock* {
        for (const auto& b : bs)
            if (b.id == id) return &b;
        return nullptr;
    };
    for (std::size_t i = 0; i < path.size(); ++i) {
        const Node& n = path[i];
        const auto* blocks = comp_of(n.instance);
        if (!blocks) continue;
        const passes::ControlBlock* arm_block = nullptr;
        if (n.kind == NodeKind::Control) {
            arm_block = find_block(*blocks, std::stoull(n.name));
        } else if (n.kind == NodeKind::Group && i > 0 && path[i - 1].kind == NodeKind::Control &&
                   path[i - 1].instance == n.instance) {
            // A group enabled directly in a par arm: locate its enable block under that par.
            const uint64_t pid = std::stoull(path[i - 1].name);
            for (const auto& b : *blocks)
                if (b.kind == "enable" && b.callee == n.name && b.parent && *b.parent == pid) {
                    arm_block = &b;
                    break;
                }
        }
        if (arm_block && arm_block->par_arm && arm_block->parent) {
            if (!key.empty()) key += "/";
            key += n.instance + "#" + std::to_string(*arm_block->parent) + "." + std::to_string(*arm_block->par_arm);
        }
    }
    return key;
}

std::vector<Span> span_extract(const ProfileTrace& pt) {
    std::vector<Span> done;
    std::map<std::vector<Node>, Span> open;
    for (uint64_t cycle = 0; cycle < pt.trees.size(); ++cycle) {
        const CallTree& tree = pt.trees[cycle];
        std::map<Node, Node> parent;
        for (const auto& [p, c] : tree.edges) parent.emplace(c, p);
        std::set<std::vector<Node>> now;
        for (const auto& n : tree.nodes) {
            std::vector<Node> path{n};
            for (auto it = parent.find(n); it != parent.end(); it = parent.find(it->second)) path.push_back(it->second);
            std::reverse(path.begin(), path.end());
            now.insert(path);
        }
        for (auto it = open.begin(); it != open.end();) {
            if (!now.count(it->first)) {
                done.push_back(std::move(it->second));
                it = open.erase(it);
            } else {
                it->second.end = cycle;
                ++it;
            }
        }
        for (const auto& path : now) {
            if (open.count(path)) continue;
            Span s;
            s.path = path;
            s.start = s.end = cycle;
            s.thread = thread_key(path, pt.map);
            open.emplace(path, std::move(s));
        }
    }
    for (auto& [path, s] : open) done.push_back(std::move(s));
    std::sort(done.begin(), done.end(), [](const Span& a, const Span& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.path < b.path;
    });
    return done;
}

}  // namespace cyclometer::trace
