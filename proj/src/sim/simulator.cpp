#include "cyclometer/passes.hpp"
#include "cyclometer/sim.hpp"

#include "prim_core.hpp"

#include <algorithm>
#include <numeric>

namespace cyclometer::sim {

namespace {

struct CAtom {
    bool is_net = false;
    uint32_t net = 0;
    uint64_t lit = 0;
};

struct CGuard {
    il::Guard::Op op = il::Guard::Op::True;
    CAtom atom;
    std::vector<CGuard> args;
};

struct FAssign {
    uint32_t dst;
    CGuard guard;
    CAtom src;
    int inst;
    int group;  // -1 for continuous assignments
};

enum class Role { User, Wrapper, Comb, Compilation, Transparent };

struct FGroup {
    int inst;
    std::string name;
    uint32_t go;
    Role role;
    uint64_t control_id = 0;
};

struct FPrim {
    int inst;
    std::string name;
    il::Primitive prim;
    std::vector<uint32_t> in, out;
    PrimState state;
    std::optional<uint32_t> go;
};

struct FInst {
    std::string path;
    int parent = -1;
    uint32_t go = 0, done = 0;
};

class Simulator {
  public:
    Simulator(const il::Program& p, const MemoryImage& mem, SimOptions opts) : prog_(p), opts_(opts) {
        flatten(p.main(), "main", -1);
        init_memories(mem);
        drivers_.assign(nets_.size(), {});
        for (std::size_t i = 0; i < assigns_.size(); ++i) drivers_[assigns_[i].dst].push_back(static_cast<uint32_t>(i));
        for (uint32_t n = 0; n < nets_.size(); ++n)
            if (!drivers_[n].empty()) driven_.push_back(n);
        for (const auto& pr : prims_)
            for (uint32_t o : pr.out)
                if (!drivers_[o].empty()) throw SimError("primitive output " + nets_[o] + " is also assigned");
        val_.assign(nets_.size(), 0);
        active_driver_.assign(nets_.size(), -1);
    }

    SimResult run() {
        SimResult r;
        // Signals are recorded in VCD declaration order.
        std::vector<uint32_t> order(nets_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return vcd_order_less(nets_[a], nets_[b]); });
        for (uint32_t n : order) {
            r.trace.names.push_back(nets_[n]);
            r.trace.widths.push_back(widths_[n]);
        }
        r.trace.changes.resize(nets_.size());

        std::vector<uint64_t> last(nets_.size(), 0);
        for (uint64_t t = 0;; ++t) {
            if (t >= opts_.max_cycles)
                throw SimError("simulation exceeded " + std::to_string(opts_.max_cycles) + " cycles without finishing");
            settle(t);
            for (std::size_t i = 0; i < order.size(); ++i) {
                uint64_t v = val_[order[i]];
                if (t == 0 || v != last[i]) r.trace.changes[i].emplace_back(t, v);
                last[i] = v;
            }
            if (opts_.ground_truth) record_truth(r.truth);
            const bool finished = val_[insts_[0].done] != 0;
            commit();
            if (finished) {
                r.cycles = t + 1;
                break;
            }
        }
        r.trace.cycle_count = r.cycles;
        for (const auto& pr : prims_)
            if (pr.prim.kind == il::PrimKind::CombMemD1) r.memories[insts_[pr.inst].path + "." + pr.name] = pr.state.mem;
        return r;
    }

  private:
    uint32_t net(const std::string& name, uint32_t width) {
        auto it = net_index_.find(name);
        if (it != net_index_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(nets_.size());
        nets_.push_back(name);
        widths_.push_back(width);
        net_index_.emplace(name, id);
        return id;
    }

    uint32_t port_net(const std::string& path, const il::Component& c, const il::PortRef& ref) {
        auto w = il::port_width(prog_, c, ref);
        if (!w) throw SimError("cannot resolve port " + ref.str() + " in " + c.name);
        switch (ref.kind) {
            case il::PortRef::Kind::This:
                return net(path + "." + ref.port, *w);
            default:
                return net(path + "." + ref.owner + "." + ref.port, *w);
        }
    }

    CAtom atom(const std::string& path, const il::Component& c, const il::Atom& a) {
        CAtom r;
        if (const auto* ref = std::get_if<il::PortRef>(&a)) {
            r.is_net = true;
            r.net = port_net(path, c, *ref);
        } else {
            const auto& l = std::get<il::Literal>(a);
            r.lit = l.value & mask(l.width);
        }
        return r;
    }

    CGuard guard(const std::string& path, const il::Component& c, const il::Guard& g) {
        CGuard r;
        r.op = g.op;
        if (g.op == il::Guard::Op::Atom) r.atom = atom(path, c, g.atom);
        for (const auto& a : g.args) r.args.push_back(guard(path, c, a));
        return r;
    }

    int flatten(const il::Component& c, const std::string& path, int parent) {
        const int id = static_cast<int>(insts_.size());
        insts_.push_back(FInst{path, parent, net(path + ".go", 1), net(path + ".done", 1)});
        for (const auto& p : c.inputs) net(path + "." + p.name, p.width);
        for (const auto& p : c.outputs) net(path + "." + p.name, p.width);

        for (const auto& cell : c.cells) {
            if (!cell.is_primitive()) {
                const il::Component* sub = prog_.find(cell.component());
                if (!sub) throw SimError("unknown component " + cell.component());
                flatten(*sub, path + "." + cell.name, id);
                continue;
            }
            FPrim pr;
            pr.inst = id;
            pr.name = cell.name;
            pr.prim = cell.primitive();
            for (const auto& spec : il::primitive_ports(pr.prim)) {
                uint32_t n = net(path + "." + cell.name + "." + spec.name, spec.width);
                (spec.dir == il::Direction::In ? pr.in : pr.out).push_back(n);
            }
            if (auto go = il::primitive_go_port(pr.prim.kind)) pr.go = net(path + "." + cell.name + "." + *go, 1);
            if (pr.prim.kind == il::PrimKind::CombMemD1) {
                pr.state.mem.assign(pr.prim.params[1], 0);
                if (cell.attrs.has(passes::attr::kExternal)) externals_.push_back(path + "." + cell.name);
            }
            prims_.push_back(std::move(pr));
        }

        for (const auto& g : c.groups) {
            FGroup fg{id, g.name, net(path + "." + g.name + ".go", 1), Role::User, 0};
            net(path + "." + g.name + ".done", 1);
            if (auto kind = passes::compilation_kind(g)) {
                fg.role = *kind == passes::CompKind::StaticEnable ? Role::Transparent : Role::Compilation;
                fg.control_id = g.attrs.get(passes::attr::kId).value_or(0);
            } else if (g.attrs.has(passes::attr::kWrapper)) {
                fg.role = Role::Wrapper;
            } else if (g.kind == il::GroupKind::Comb) {
                fg.role = Role::Comb;
            }
            const int gi = static_cast<int>(groups_.size());
            groups_.push_back(fg);
            for (const auto& a : g.assigns)
                assigns_.push_back(FAssign{port_net(path, c, a.dst), guard(path, c, a.guard), atom(path, c, a.src), id, gi});
        }
        for (const auto& a : c.continuous)
            assigns_.push_back(FAssign{port_net(path, c, a.dst), guard(path, c, a.guard), atom(path, c, a.src), id, -1});
        if (c.control.kind != il::Control::Kind::Empty)
            throw SimError("component " + c.name + " still has control; simulate expects a lowered program");
        return id;
    }

    void init_memories(const MemoryImage& mem) {
        for (const auto& [key, data] : mem) {
            const std::string path = key.find('.') == std::string::npos ? "main." + key : key;
            bool found = false;
            for (auto& pr : prims_) {
                if (pr.prim.kind != il::PrimKind::CombMemD1 || insts_[pr.inst].path + "." + pr.name != path) continue;
                if (data.size() > pr.state.mem.size())
                    throw SimError("image for " + path + " has " + std::to_string(data.size()) +
                                   " entries but the memory holds " + std::to_string(pr.state.mem.size()));
                const uint64_t m = mask(pr.prim.width());
                for (std::size_t i = 0; i < data.size(); ++i) pr.state.mem[i] = data[i] & m;
                found = true;
            }
            if (!found) throw SimError("memory image names unknown memory " + path);
        }
        for (const auto& e : externals_) {
            const std::string short_key = e.substr(5);
            if (!mem.count(e) && !(e.rfind("main.", 0) == 0 && mem.count(short_key)))
                throw SimError("external memory " + e + " has no image");
        }
    }

    uint64_t read(const CAtom& a) const { return a.is_net ? val_[a.net] : a.lit; }

    bool eval(const CGuard& g) const {
        switch (g.op) {
            case il::Guard::Op::True: return true;
            case il::Guard::Op::Atom: return read(g.atom) != 0;
            case il::Guard::Op::Not: return !eval(g.args[0]);
            case il::Guard::Op::And: return eval(g.args[0]) && eval(g.args[1]);
            case il::Guard::Op::Or: return eval(g.args[0]) || eval(g.args[1]);
            case il::Guard::Op::Eq: return read(g.args[0].atom) == read(g.args[1].atom);
            case il::Guard::Op::Neq: return read(g.args[0].atom) != read(g.args[1].atom);
        }
        return false;
    }

    bool active(const FAssign& a) const {
        if (a.group >= 0 && val_[groups_[a.group].go] == 0) return false;
        return eval(a.guard);
    }

    // Computes the combinational fixpoint for cycle `t`.
    void settle(uint64_t t) {
        std::fill(val_.begin(), val_.end(), 0);
        val_[insts_[0].go] = 1;
        std::vector<uint64_t> in, out;
        const std::size_t bound = assigns_.size() + prims_.size() + 8;
        std::vector<uint32_t> moving;
        for (std::size_t iter = 0;; ++iter) {
            moving.clear();
            for (uint32_t n : driven_) {
                uint64_t v = 0;
                for (uint32_t ai : drivers_[n]) {
                    const FAssign& a = assigns_[ai];
                    if (active(a)) {
                        v = read(a.src) & mask(widths_[n]);
                        break;
                    }
                }
                if (v != val_[n]) {
                    val_[n] = v;
                    moving.push_back(n);
                }
            }
            for (auto& pr : prims_) {
                in.assign(pr.in.size() + 1, 0);
                for (std::size_t i = 0; i < pr.in.size(); ++i) in[i] = val_[pr.in[i]];
                out.assign(pr.out.size(), 0);
                eval_core(pr.prim, pr.state, in.data(), out.data());
                for (std::size_t i = 0; i < pr.out.size(); ++i) {
                    if (val_[pr.out[i]] != out[i]) {
                        val_[pr.out[i]] = out[i];
                        moving.push_back(pr.out[i]);
                    }
                }
            }
            if (moving.empty()) break;
            if (iter >= bound) {
                std::string names;
                for (std::size_t i = 0; i < moving.size() && i < 8; ++i) names += (i ? ", " : "") + nets_[moving[i]];
                throw SimError("combinational loop at cycle " + std::to_string(t) + " through " + names);
            }
        }
        // Conflicting drivers.
        for (uint32_t n : driven_) {
            int first = -1;
            for (uint32_t ai : drivers_[n]) {
                if (!active(assigns_[ai])) continue;
                if (first >= 0)
                    throw SimError("multiple active drivers for " + nets_[n] + " at cycle " + std::to_string(t));
                first = static_cast<int>(ai);
            }
            active_driver_[n] = first;
        }
    }

    void commit() {
        std::vector<uint64_t> in;
        for (auto& pr : prims_) {
            in.assign(pr.in.size() + 1, 0);
            for (std::size_t i = 0; i < pr.in.size(); ++i) in[i] = val_[pr.in[i]];
            commit_core(pr.prim, pr.state, in.data(), insts_[pr.inst].path + "." + pr.name);
        }
    }

    // The call-tree node responsible for driving `go_net` high in instance `inst`.
    Node parent_of(uint32_t go_net, int inst) const {
        int d = active_driver_[go_net];
        for (int guard = 0; d >= 0 && guard < 1000; ++guard) {
            const FAssign& a = assigns_[d];
            if (a.group < 0) return Node::cell(insts_[a.inst].path);
            const FGroup& g = groups_[a.group];
            switch (g.role) {
                case Role::Compilation:
                    return Node::control(insts_[g.inst].path, g.control_id);
                case Role::User:
                    return Node::group(insts_[g.inst].path, g.name);
                default:
                    d = active_driver_[g.go];
                    inst = g.inst;
                    break;
            }
        }
        return Node::cell(insts_[inst].path);
    }

    void record_truth(GroundTruth& gt) const {
        CallTree tree;
        std::set<std::string> groups, cells, control;
        tree.nodes.insert(Node::cell("main"));
        for (std::size_t i = 0; i < insts_.size(); ++i) {
            const FInst& fi = insts_[i];
            if (!val_[fi.go]) continue;
            cells.insert(fi.path);
            if (fi.parent >= 0) tree.add_edge(parent_of(fi.go, fi.parent), Node::cell(fi.path));
        }
        for (const auto& g : groups_) {
            if (!val_[g.go]) continue;
            const std::string& path = insts_[g.inst].path;
            groups.insert(path + "." + g.name);
            switch (g.role) {
                case Role::User:
                    tree.add_edge(parent_of(g.go, g.inst), Node::group(path, g.name));
                    break;
                case Role::Compilation:
                    control.insert(path + "." + g.name);
                    tree.add_edge(parent_of(g.go, g.inst), Node::control(path, g.control_id));
                    break;
                default:
                    break;
            }
        }
        for (const auto& pr : prims_) {
            if (!pr.go || !val_[*pr.go]) continue;
            int d = active_driver_[*pr.go];
            if (d < 0 || assigns_[d].group < 0) continue;
            const FGroup& g = groups_[assigns_[d].group];
            if (g.role != Role::User) continue;
            const std::string& path = insts_[pr.inst].path;
            tree.add_edge(Node::group(path, g.name), Node::primitive(path, pr.name));
        }
        gt.trees.push_back(std::move(tree));
        gt.active_groups.push_back(std::move(groups));
        gt.active_cells.push_back(std::move(cells));
        gt.active_control.push_back(std::move(control));
    }

    const il::Program& prog_;
    SimOptions opts_;
    std::vector<std::string> nets_;
    std::vector<uint32_t> widths_;
    std::map<std::string, uint32_t> net_index_;
    std::vector<FInst> insts_;
    std::vector<FGroup> groups_;
    std::vector<FPrim> prims_;
    std::vector<FAssign> assigns_;
    std::vector<std::string> externals_;
    std::vector<std::vector<uint32_t>> drivers_;
    std::vector<uint32_t> driven_;
    std::vector<uint64_t> val_;
    std::vector<int> active_driver_;
};

}  // namespace

SimResult simulate(const il::Program& lowered, const MemoryImage& mem_init, SimOptions opts) {
    return Simulator(lowered, mem_init, opts).run();
}

}  // namespace cyclometer::sim
