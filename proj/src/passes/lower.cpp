#include "util.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cyclometer::passes {

using namespace detail;
using il::Control;
using il::Guard;
using il::PortRef;
using Kind = il::Control::Kind;

il::Program desugar_while_with(il::Program p, LowerOptions opts) {
    for (auto& c : p.components) {
        const bool wrap = std::any_of(c.groups.begin(), c.groups.end(),
                                      [](const il::Group& g) { return g.attrs.has(attr::kWrapper); });
        uint64_t next = next_id(c.control);
        std::map<std::string, int> sites;

        auto site = [&](const std::string& gname) {
            std::string target = gname;
            if (wrap) {
                il::Group w;
                w.name = fresh_name(c, gname + "__site" + std::to_string(sites[gname]++));
                w.attrs.set(std::string(attr::kWrapper));
                w.assigns.push_back(assign(PortRef::hole(gname, "go"), lit(1, 1)));
                w.assigns.push_back(assign(PortRef::hole(w.name, "done"), PortRef::hole(gname, "done")));
                target = w.name;
                c.groups.push_back(std::move(w));
                if (opts.instrument) instrument_group(p, c, target);
            }
            Control e = Control::enable(target);
            e.attrs.set(std::string(attr::kId), next++);
            return e;
        };

        // Rewrites one loop in place and returns the enable that must run before it.
        auto lower_loop = [&](Control& w) {
            const il::Group* comb = c.find_group(w.with);
            if (!comb || comb->kind != il::GroupKind::Comb)
                throw PassError("'with' group '" + w.with + "' is not a combinational group");
            std::vector<il::Assignment> body_assigns = comb->assigns;

            const std::string reg = fresh_name(c, w.with + "_reg");
            c.cells.push_back(make_cell(reg, il::PrimKind::Register, {1}));
            il::Group g;
            g.name = fresh_name(c, w.with + "_group");
            g.assigns = std::move(body_assigns);
            g.assigns.push_back(assign(PortRef::cell(reg, "in"), *w.cond));
            g.assigns.push_back(assign(PortRef::cell(reg, "write_en"), lit(1, 1)));
            g.assigns.push_back(assign(PortRef::hole(g.name, "done"), PortRef::cell(reg, "done")));
            const std::string gname = g.name;
            c.groups.push_back(std::move(g));
            if (opts.instrument) instrument_group(p, c, gname);

            Control before = site(gname);
            Control after = site(gname);
            w.cond = PortRef::cell(reg, "out");
            w.with.clear();
            Control& body = w.children[0];
            if (body.kind == Kind::Empty) {
                body = std::move(after);
            } else if (body.kind == Kind::Seq || body.kind == Kind::StaticSeq) {
                body.children.push_back(std::move(after));
            } else {
                Control s;
                s.kind = body.is_static() ? Kind::StaticSeq : Kind::Seq;
                s.attrs.set(std::string(attr::kId), next++);
                s.children.push_back(std::move(body));
                s.children.push_back(std::move(after));
                body = std::move(s);
            }
            return before;
        };

        auto needs = [](const Control& n) { return n.kind == Kind::While && !n.with.empty(); };

        std::function<void(Control&)> rewrite = [&](Control& n) {
            for (auto& ch : n.children) rewrite(ch);
            if (n.kind == Kind::Seq) {
                std::vector<Control> out;
                for (auto& ch : n.children) {
                    if (needs(ch)) out.push_back(lower_loop(ch));
                    out.push_back(std::move(ch));
                }
                n.children = std::move(out);
                return;
            }
            for (auto& ch : n.children) {
                if (!needs(ch)) continue;
                Control s;
                s.kind = Kind::Seq;
                s.attrs.set(std::string(attr::kId), next++);
                s.children.push_back(lower_loop(ch));
                s.children.push_back(std::move(ch));
                ch = std::move(s);
            }
        };
        rewrite(c.control);
        if (needs(c.control)) {
            Control s;
            s.kind = Kind::Seq;
            s.attrs.set(std::string(attr::kId), next++);
            s.children.push_back(lower_loop(c.control));
            s.children.push_back(std::move(c.control));
            c.control = std::move(s);
        }
    }
    return p;
}

namespace {

class Lowerer {
  public:
    Lowerer(il::Component& c, SourceMap& map) : c_(c), map_(map) {}

    void run() {
        ensure_ids(c_.control);
        auto blocks = control_blocks(c_);
        for (const auto& b : blocks) paths_[b.id] = b.path;
        map_.control_blocks[c_.name] = std::move(blocks);

        if (c_.control.kind == Kind::Empty) {
            c_.continuous.push_back(assign(PortRef::self("done"), PortRef::self("go")));
        } else {
            std::string top = compile(c_.control);
            c_.continuous.push_back(assign(PortRef::hole(top, "go"), PortRef::self("go")));
            c_.continuous.push_back(assign(PortRef::self("done"), PortRef::hole(top, "done")));
        }
        c_.control = Control::empty();
    }

  private:
    struct Counted {
        std::string group;
        std::string counter;
        uint32_t width = 1;
    };

    static uint64_t id_of(const Control& n) {
        auto id = n.id();
        if (!id) throw PassError("control node without an id");
        return *id;
    }

    void add(const std::string& group, il::Assignment a) { c_.find_group(group)->assigns.push_back(std::move(a)); }

    std::string new_group(const std::string& base, il::GroupKind kind, std::string_view marker, uint64_t id,
                          CompKind ck) {
        il::Group g;
        g.name = fresh_name(c_, base);
        g.kind = kind;
        g.attrs.set(std::string(marker));
        g.attrs.set(std::string(attr::kId), id);
        const std::string name = g.name;
        c_.groups.push_back(std::move(g));
        map_.control_groups[c_.name + "." + name] = CompilationGroup{c_.name, name, ck, ControlId{c_.name, id, paths_[id]}};
        return name;
    }

    std::string new_register(const std::string& base, uint32_t width, std::string_view marker, RegisterKind rk,
                             const std::string& owner) {
        il::Cell cell = make_cell(fresh_name(c_, base), il::PrimKind::Register, {width});
        cell.attrs.set(std::string(marker));
        const std::string name = cell.name;
        c_.cells.push_back(std::move(cell));
        map_.control_registers.push_back(ControlRegister{c_.name, name, rk, owner, {}});
        return name;
    }

    std::string compile(const Control& n) {
        switch (n.kind) {
            case Kind::Enable: {
                const il::Group* g = c_.find_group(n.group);
                if (!g) throw PassError("enable of unknown group '" + n.group + "'");
                if (g->kind == il::GroupKind::Static) {
                    const std::string callee = g->name;
                    Counted k = counted_group("static_en" + std::to_string(id_of(n)), g->latency, attr::kStaticEnable,
                                              id_of(n), CompKind::StaticEnable);
                    add(k.group, assign(PortRef::hole(callee, "go"), lit(1, 1)));
                    return k.group;
                }
                return g->name;
            }
            case Kind::Par:
                return compile_par(n);
            case Kind::StaticSeq:
            case Kind::StaticPar:
                return compile_static(n).group;
            case Kind::Seq:
            case Kind::If:
            case Kind::While:
                return compile_tdcc(n);
            case Kind::Empty:
                break;
        }
        throw PassError("cannot compile an empty control block");
    }

    std::string compile_par(const Control& n) {
        const uint64_t id = id_of(n);
        const std::string par = new_group("par" + std::to_string(id), il::GroupKind::Dynamic, attr::kPar, id, CompKind::Par);
        std::vector<std::pair<std::string, std::string>> arms;  // (callee, pd register)
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (n.children[i].kind == Kind::Empty) continue;
            std::string callee = compile(n.children[i]);
            std::string pd = new_register("pd" + std::to_string(id) + "_" + std::to_string(i), 1, attr::kPd,
                                          RegisterKind::Pd, par);
            arms.emplace_back(std::move(callee), std::move(pd));
        }
        std::vector<Guard> all_done;
        for (const auto& [callee, pd] : arms) all_done.push_back(Guard::port(PortRef::cell(pd, "out")));
        Guard all = all_of(all_done);
        for (const auto& [callee, pd] : arms) {
            Guard child_done = Guard::port(PortRef::hole(callee, "done"));
            add(par, assign(PortRef::hole(callee, "go"), lit(1, 1), Guard::negate(Guard::port(PortRef::cell(pd, "out")))));
            add(par, assign(PortRef::cell(pd, "in"), lit(1, 1), child_done));
            add(par, assign(PortRef::cell(pd, "in"), lit(1, 0), all));
            add(par, assign(PortRef::cell(pd, "write_en"), lit(1, 1), Guard::disj(child_done, all)));
        }
        add(par, assign(PortRef::hole(par, "done"), lit(1, 1), all));
        return par;
    }

    // A group with a free-running counter that finishes after `latency` cycles.
    Counted counted_group(const std::string& base, uint64_t latency, std::string_view marker, uint64_t id, CompKind ck) {
        if (latency < 1) throw PassError("static block with zero latency");
        Counted k;
        k.group = new_group(base, il::GroupKind::Dynamic, marker, id, ck);
        k.width = bits_for(latency - 1);
        k.counter = new_register("cnt" + std::to_string(id), k.width, attr::kCounter, RegisterKind::Counter, k.group);
        const PortRef out = PortRef::cell(k.counter, "out");
        const il::Literal last = lit(k.width, latency - 1);
        if (latency == 1) {
            add(k.group, assign(PortRef::cell(k.counter, "in"), lit(k.width, 0)));
        } else {
            il::Cell incr = make_cell(fresh_name(c_, k.counter + "_incr"), il::PrimKind::Adder, {k.width});
            const std::string incr_name = incr.name;
            c_.cells.push_back(std::move(incr));
            add(k.group, assign(PortRef::cell(incr_name, "left"), out));
            add(k.group, assign(PortRef::cell(incr_name, "right"), lit(k.width, 1)));
            add(k.group, assign(PortRef::cell(k.counter, "in"), PortRef::cell(incr_name, "out"), Guard::neq(out, last)));
            add(k.group, assign(PortRef::cell(k.counter, "in"), lit(k.width, 0), Guard::eq(out, last)));
        }
        add(k.group, assign(PortRef::cell(k.counter, "write_en"), lit(1, 1)));
        add(k.group, assign(PortRef::hole(k.group, "done"), lit(1, 1), Guard::eq(out, last)));
        return k;
    }

    uint64_t latency_of(const Control& n) const {
        auto l = control_latency(c_, n);
        if (!l) throw PassError("static block contains a child without a fixed latency");
        return *l;
    }

    Counted compile_static(const Control& n) {
        const uint64_t id = id_of(n);
        const uint64_t latency = latency_of(n);
        Counted k = counted_group("static" + std::to_string(id), latency, attr::kStatic, id, CompKind::Static);
        schedule(n, 0, k.group, k, latency);
        return k;
    }

    Guard cycle_range(const Counted& k, uint64_t from, uint64_t to, uint64_t latency) const {
        if (from == 0 && to >= latency) return Guard::always();
        std::vector<Guard> gs;
        for (uint64_t t = from; t < to; ++t) gs.push_back(Guard::eq(PortRef::cell(k.counter, "out"), lit(k.width, t)));
        return any_of(gs);
    }

    void schedule(const Control& n, uint64_t base, const std::string& group, const Counted& k, uint64_t total) {
        uint64_t offset = base;
        for (const auto& ch : n.children) {
            const uint64_t lat = latency_of(ch);
            const uint64_t start = n.kind == Kind::StaticSeq ? offset : base;
            Guard g = cycle_range(k, start, start + lat, total);
            if (ch.kind == Kind::Enable) {
                add(group, assign(PortRef::hole(ch.group, "go"), lit(1, 1), std::move(g)));
            } else if (ch.is_static()) {
                const uint64_t cid = id_of(ch);
                std::string region = new_group("region" + std::to_string(cid), il::GroupKind::Comb, attr::kRegion, cid,
                                               CompKind::Region);
                add(group, assign(PortRef::hole(region, "go"), lit(1, 1), std::move(g)));
                schedule(ch, start, region, k, total);
            } else {
                throw PassError("static block contains dynamic control");
            }
            offset += lat;
        }
    }

    // ---- FSM construction for seq/if/while trees ----

    enum class SK { Run, Trans, Loop, Placeholder };
    struct State {
        SK kind;
        uint64_t owner;  // innermost block that owns the state
        std::string callee;
        Counted body;  // Loop states
        PortRef cond;  // Loop states
        int next = -1; // Run states: the transition state that follows
    };
    struct Edge {
        int from;
        int to;  // -1: exit
        Guard guard;
        std::set<std::string> combs;
    };
    struct Pending {
        int from;
        Guard guard;
        std::set<std::string> combs;
    };

    struct Fsm {
        std::vector<State> states;
        std::vector<Edge> edges;
        std::map<uint64_t, uint64_t> block_parent;
    };

    static std::vector<Pending> restrict(std::vector<Pending> v, const Guard& g, const std::string& comb) {
        for (auto& p : v) {
            p.guard = Guard::conj(std::move(p.guard), g);
            if (!comb.empty()) p.combs.insert(comb);
        }
        return v;
    }

    static void link(Fsm& f, const std::vector<Pending>& from, int to) {
        for (const auto& p : from) f.edges.push_back({p.from, to, p.guard, p.combs});
    }

    static int add_state(Fsm& f, State s) {
        f.states.push_back(std::move(s));
        return static_cast<int>(f.states.size()) - 1;
    }

    std::vector<Pending> build(Fsm& f, const Control& n, uint64_t owner, std::vector<Pending> entries) {
        switch (n.kind) {
            case Kind::Empty:
                return entries;
            case Kind::Enable:
            case Kind::Par:
            case Kind::StaticSeq:
            case Kind::StaticPar: {
                std::string callee = compile(n);
                int run = add_state(f, State{SK::Run, owner, callee, {}, {}, -1});
                link(f, entries, run);
                int t = add_state(f, State{SK::Trans, owner, {}, {}, {}, -1});
                f.states[run].next = t;
                return {Pending{t, Guard::always(), {}}};
            }
            case Kind::Seq: {
                const uint64_t id = id_of(n);
                if (id != owner) f.block_parent[id] = owner;
                for (const auto& ch : n.children) entries = build(f, ch, id, std::move(entries));
                return entries;
            }
            case Kind::If: {
                const uint64_t id = id_of(n);
                if (id != owner) f.block_parent[id] = owner;
                const Guard cond = Guard::port(*n.cond);
                auto a = build(f, n.children[0], id, restrict(entries, cond, n.with));
                auto b = build(f, n.children[1], id, restrict(entries, Guard::negate(cond), n.with));
                a.insert(a.end(), b.begin(), b.end());
                return a;
            }
            case Kind::While:
                return build_while(f, n, owner, std::move(entries));
        }
        return entries;
    }

    std::vector<Pending> build_while(Fsm& f, const Control& n, uint64_t owner, std::vector<Pending> entries) {
        const uint64_t id = id_of(n);
        if (id != owner) f.block_parent[id] = owner;
        const Guard cond = Guard::port(*n.cond);
        const Guard not_cond = Guard::negate(cond);
        const Control& body = n.children[0];

        if (body.is_static()) {
            // One state runs the body back to back while the condition holds.
            Counted k = compile_static(body);
            const Guard idle = Guard::eq(PortRef::cell(k.counter, "out"), lit(k.width, 0));
            int loop = add_state(f, State{SK::Loop, id, k.group, k, *n.cond, -1});
            link(f, restrict(entries, cond, n.with), loop);
            auto exits = restrict(std::move(entries), not_cond, n.with);
            std::set<std::string> combs;
            if (!n.with.empty()) combs.insert(n.with);
            exits.push_back(Pending{loop, Guard::conj(not_cond, idle), combs});
            return exits;
        }

        // The body is built from a placeholder head; edges leaving the head are
        // then re-issued from every state that can start an iteration.
        int head = add_state(f, State{SK::Placeholder, id, {}, {}, {}, -1});
        auto body_exits = build(f, body, id, {Pending{head, Guard::always(), {}}});
        std::vector<Pending> through, finished;
        for (auto& p : body_exits) (p.from == head ? through : finished).push_back(std::move(p));
        std::vector<Edge> from_head;
        std::erase_if(f.edges, [&](const Edge& e) {
            if (e.from != head) return false;
            from_head.push_back(e);
            return true;
        });

        auto starts = restrict(entries, cond, n.with);
        auto again = restrict(finished, cond, n.with);
        starts.insert(starts.end(), again.begin(), again.end());
        for (const auto& s : starts) {
            for (const auto& e : from_head) {
                std::set<std::string> combs = s.combs;
                combs.insert(e.combs.begin(), e.combs.end());
                f.edges.push_back({s.from, e.to, Guard::conj(s.guard, e.guard), combs});
            }
            for (const auto& t : through) {
                std::set<std::string> combs = s.combs;
                combs.insert(t.combs.begin(), t.combs.end());
                f.edges.push_back({s.from, head, Guard::conj(s.guard, t.guard), combs});
            }
        }

        auto exits = restrict(std::move(entries), not_cond, n.with);
        auto done = restrict(std::move(finished), not_cond, n.with);
        exits.insert(exits.end(), done.begin(), done.end());

        if (!through.empty()) {
            // Some path through the body takes no cycles: the head becomes a
            // real state that spends one cycle per empty iteration.
            f.states[head].kind = SK::Trans;
            std::set<std::string> with;
            if (!n.with.empty()) with.insert(n.with);
            for (const auto& e : from_head) {
                std::set<std::string> combs = with;
                combs.insert(e.combs.begin(), e.combs.end());
                f.edges.push_back({head, e.to, Guard::conj(cond, e.guard), combs});
            }
            for (const auto& t : through) {
                std::set<std::string> combs = with;
                combs.insert(t.combs.begin(), t.combs.end());
                f.edges.push_back({head, head, Guard::conj(cond, t.guard), combs});
            }
            exits.push_back(Pending{head, not_cond, with});
        }
        return exits;
    }

    std::string compile_tdcc(const Control& root) {
        const uint64_t root_id = id_of(root);
        Fsm f;
        int entry = add_state(f, State{SK::Trans, root_id, {}, {}, {}, -1});
        auto exits = build(f, root, root_id, {Pending{entry, Guard::always(), {}}});
        for (const auto& p : exits) f.edges.push_back({p.from, -1, p.guard, p.combs});

        int initial = entry;
        {
            std::vector<const Edge*> out;
            for (const auto& e : f.edges)
                if (e.from == entry) out.push_back(&e);
            if (out.size() == 1 && out[0]->guard.is_true() && out[0]->to >= 0 &&
                f.states[out[0]->to].kind == SK::Run && out[0]->combs.empty()) {
                initial = out[0]->to;
                f.states[entry].kind = SK::Placeholder;
                std::erase_if(f.edges, [&](const Edge& e) { return e.from == entry; });
            }
        }

        // Dense numbering of the real states in creation order.
        std::vector<int> index(f.states.size(), -1);
        uint64_t count = 0;
        for (std::size_t i = 0; i < f.states.size(); ++i)
            if (f.states[i].kind != SK::Placeholder) index[i] = static_cast<int>(count++);

        const std::string tdcc = new_group("tdcc" + std::to_string(root_id), il::GroupKind::Dynamic, attr::kTdcc,
                                           root_id, CompKind::Tdcc);
        const uint32_t width = bits_for(count == 0 ? 0 : count - 1);
        const std::string fsm = new_register("fsm" + std::to_string(root_id), width, attr::kFsm, RegisterKind::Fsm, tdcc);
        auto at = [&](int s) { return Guard::eq(PortRef::cell(fsm, "out"), lit(width, static_cast<uint64_t>(index[s]))); };

        // Region groups for nested blocks that own at least one state.
        std::map<uint64_t, std::string> region;
        auto owns = [&](uint64_t block, uint64_t owner) {
            for (uint64_t b = owner;;) {
                if (b == block) return true;
                auto it = f.block_parent.find(b);
                if (it == f.block_parent.end()) return false;
                b = it->second;
            }
        };
        auto group_of = [&](uint64_t block) { return block == root_id ? tdcc : region.at(block); };
        for (const auto& [block, parent] : f.block_parent) {
            std::vector<Guard> in;
            for (std::size_t s = 0; s < f.states.size(); ++s)
                if (index[s] >= 0 && owns(block, f.states[s].owner)) in.push_back(at(static_cast<int>(s)));
            if (in.empty()) continue;
            region[block] = new_group("region" + std::to_string(block), il::GroupKind::Comb, attr::kRegion, block,
                                      CompKind::Region);
        }
        // Parents are created before use by walking blocks outermost first.
        std::vector<uint64_t> order;
        for (const auto& [block, g] : region) order.push_back(block);
        auto depth = [&](uint64_t b) {
            int d = 0;
            for (auto it = f.block_parent.find(b); it != f.block_parent.end(); it = f.block_parent.find(it->second)) ++d;
            return d;
        };
        std::stable_sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) { return depth(a) < depth(b); });
        for (uint64_t block : order) {
            std::vector<Guard> in;
            for (std::size_t s = 0; s < f.states.size(); ++s)
                if (index[s] >= 0 && owns(block, f.states[s].owner)) in.push_back(at(static_cast<int>(s)));
            uint64_t parent = f.block_parent.at(block);
            while (parent != root_id && !region.count(parent)) parent = f.block_parent.at(parent);
            add(group_of(parent), assign(PortRef::hole(region[block], "go"), lit(1, 1), any_of(in)));
        }
        auto owner_group = [&](uint64_t owner) {
            while (owner != root_id && !region.count(owner)) owner = f.block_parent.at(owner);
            return group_of(owner);
        };

        std::map<uint64_t, std::vector<Guard>> fsm_in;
        std::vector<Guard> writes, done;
        ControlRegister* reg = &map_.control_registers.back();
        for (std::size_t i = 0; i < f.states.size(); ++i) {
            const State& s = f.states[i];
            if (index[i] < 0) continue;
            const int si = static_cast<int>(i);
            if (s.kind == SK::Run) {
                add(owner_group(s.owner), assign(PortRef::hole(s.callee, "go"), lit(1, 1), at(si)));
                Guard g = Guard::conj(at(si), Guard::port(PortRef::hole(s.callee, "done")));
                fsm_in[static_cast<uint64_t>(index[s.next])].push_back(g);
                writes.push_back(std::move(g));
            } else {
                reg->update_states.push_back(static_cast<uint64_t>(index[i]));
                if (s.kind == SK::Loop) {
                    Guard busy = Guard::neq(PortRef::cell(s.body.counter, "out"), lit(s.body.width, 0));
                    Guard go = Guard::conj(at(si), Guard::disj(Guard::port(s.cond), busy));
                    add(owner_group(s.owner), assign(PortRef::hole(s.callee, "go"), lit(1, 1), std::move(go)));
                }
            }
        }

        std::map<std::string, std::map<int, bool>> comb_states;
        for (const auto& e : f.edges) {
            if (index[e.from] < 0) throw PassError("internal: edge from a removed state");
            Guard g = Guard::conj(at(e.from), e.guard);
            const uint64_t target = e.to < 0 ? static_cast<uint64_t>(index[initial]) : static_cast<uint64_t>(index[e.to]);
            fsm_in[target].push_back(g);
            writes.push_back(g);
            if (e.to < 0) done.push_back(g);
            for (const auto& comb : e.combs) comb_states[comb][e.from] = true;
        }
        for (const auto& [comb, states] : comb_states) {
            std::map<std::string, std::vector<Guard>> per_group;
            for (const auto& [s, _] : states) per_group[owner_group(f.states[s].owner)].push_back(at(s));
            for (const auto& [g, gs] : per_group) add(g, assign(PortRef::hole(comb, "go"), lit(1, 1), any_of(gs)));
        }
        for (const auto& [value, gs] : fsm_in) add(tdcc, assign(PortRef::cell(fsm, "in"), lit(width, value), any_of(gs)));
        if (!writes.empty()) add(tdcc, assign(PortRef::cell(fsm, "write_en"), lit(1, 1), any_of(writes)));
        add(tdcc, assign(PortRef::hole(tdcc, "done"), lit(1, 1), any_of(done)));
        std::sort(reg->update_states.begin(), reg->update_states.end());
        return tdcc;
    }

    il::Component& c_;
    SourceMap& map_;
    std::map<uint64_t, std::string> paths_;
};

}  // namespace

Lowered tdcc_lower(il::Program p, LowerOptions opts) {
    p = desugar_while_with(std::move(p), opts);
    Lowered out;
    for (auto& c : p.components) Lowerer(c, out.map).run();
    out.map.cell_tree = cell_tree(p);
    for (const auto& c : p.components)
        for (const auto& cell : c.cells)
            if (cell.attrs.has(attr::kProbe))
                if (auto probe = demangle_probe(cell.name, c)) out.map.probes.push_back(*probe);
    out.program = std::move(p);
    return out;
}

Lowered run_pipeline(const il::Program& p, PipelineOptions opts, std::string program_name) {
    il::Program q = metadata_pass(p);
    if (opts.instrument) q = instrument(std::move(q));
    if (opts.promote) q = static_promote(std::move(q));
    if (opts.instrument) q = rewrite_probe_done_guards(std::move(q));
    q = remove_dead_cells(std::move(q));
    Lowered out = tdcc_lower(std::move(q), LowerOptions{opts.instrument});
    out.map.program = std::move(program_name);
    return out;
}

}  // namespace cyclometer::passes
