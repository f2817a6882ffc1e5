#include "doctest.h"
#include "helpers.hpp"

#include "json.hpp"

using namespace cyclometer;
using testing::profile_fixture;
using viz::Rational;

namespace {

std::string mult_group(const std::string& g, const std::string& r, const std::string& m) {
    return "group " + g + " { " + m + ".left = 8'd2; " + m + ".right = 8'd3; " + m + ".go = !" + m + ".done ? 1'd1; " +
           r + ".in = " + m + ".out; " + r + ".write_en = " + m + ".done; " + g + "[done] = " + r + ".done; }\n";
}

std::map<std::string, uint64_t> folded_lines(const std::string& folded) {
    std::map<std::string, uint64_t> out;
    std::istringstream in(folded);
    std::string line;
    while (std::getline(in, line)) {
        const auto sp = line.rfind(' ');
        out[line.substr(0, sp)] = std::stoull(line.substr(sp + 1));
    }
    return out;
}

}  // namespace

TEST_CASE("rational arithmetic stays reduced") {
    Rational a(2, 4);
    CHECK(a.num == 1);
    CHECK(a.den == 2);
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(3) / 6 == Rational(1, 2));
    CHECK(Rational(0, 5) == Rational());
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("millicycle rounding keeps the total") {
    std::vector<viz::FlameStack> thirds(3);
    for (auto& s : thirds) s.weight = Rational(1, 3);
    const auto ms = viz::millicycles(thirds);
    CHECK(ms[0] + ms[1] + ms[2] == 1000);
    for (auto m : ms) CHECK((m == 333 || m == 334));

    std::vector<viz::FlameStack> one(1);
    one[0].frames = {Node::cell("main"), Node::control("main", 0), Node::group("main", "g")};
    one[0].weight = Rational(1);
    passes::SourceMap m;
    m.cell_tree["main"] = "main";
    m.control_blocks["main"] = {passes::ControlBlock{0, "seq", "main/seq", {}, {}, "", ""}};
    CHECK(viz::folded_emit(one, m) == "cell:main;control:seq#0;group:g 1000\n");
}

TEST_CASE("flame of a single enable in a seq") {
    const auto p = testing::profile_text(testing::program(
        "r = std_reg(8);", "group g { r.in = 8'd1; r.write_en = 1'd1; g[done] = r.done; }", "seq { g; }"));
    const auto lines = folded_lines(viz::folded_emit(viz::flame(p.pt), p.lowered.map));
    REQUIRE(lines.size() == 2);
    CHECK(lines.at("cell:main;control:seq#0;group:g;primitive:r") == 1000);
    CHECK(lines.at("cell:main;control:seq#0") == 1000);
}

TEST_CASE("co-active par arms are normalized to half each") {
    const auto p = testing::profile_text(testing::program(
        "a = std_reg(8);\n b = std_reg(8);\n ma = std_seq_mult(8, 3);\n mb = std_seq_mult(8, 3);",
        mult_group("ga", "a", "ma") + mult_group("gb", "b", "mb"), "par { ga; gb; }"));
    const auto stacks = viz::flame(p.pt);
    std::map<std::string, Rational> arm;
    Rational total;
    for (const auto& s : stacks) {
        total += s.weight;
        for (const auto& f : s.frames)
            if (f.kind == NodeKind::Group) arm[f.name] += s.weight;
    }
    CHECK(arm.at("ga") == Rational(2));
    CHECK(arm.at("gb") == Rational(2));
    CHECK(total == Rational(p.sim.cycles));
}

TEST_CASE("switch-case flame splits into user and control cycles") {
    const auto p = profile_fixture("switch_par.futil", "mem1.json");
    const auto lines = folded_lines(viz::folded_emit(viz::flame(p.pt), p.lowered.map));
    uint64_t user = 0, control = 0;
    for (const auto& [path, w] : lines) (path.find("group:") != std::string::npos ? user : control) += w;
    CHECK(user == 3000);
    CHECK(control == 6000);
    for (const char* g : {"group:read", "group:run_s1", "group:write"}) {
        uint64_t w = 0;
        for (const auto& [path, v] : lines)
            if (path.find(g) != std::string::npos) w += v;
        CHECK(w == 1000);
    }
}

TEST_CASE("svg is deterministic and colored by node kind") {
    const auto p = profile_fixture("switch_par.futil", "mem1.json");
    const auto stacks = viz::flame(p.pt);
    const std::string svg = viz::svg_emit(stacks, p.lowered.map);
    CHECK(svg == viz::svg_emit(viz::flame(p.pt), p.lowered.map));
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    for (const char* color : {"#9b59b6", "#e74c3c", "#f39c12", "#f1c40f"}) CHECK(svg.find(color) != std::string::npos);
    std::size_t open = 0, close = 0;
    for (std::size_t i = svg.find("<g>"); i != std::string::npos; i = svg.find("<g>", i + 1)) ++open;
    for (std::size_t i = svg.find("</g>"); i != std::string::npos; i = svg.find("</g>", i + 1)) ++close;
    CHECK(open == close);
}

TEST_CASE("timeline events follow the trace-event schema") {
    const auto p = profile_fixture("switch_par.futil", "mem1.json");
    const auto updates = viz::control_register_updates(p.sim.trace, p.lowered.map);
    const std::string doc = viz::timeline_emit(trace::span_extract(p.pt), updates, p.lowered.map);
    const auto j = nlohmann::json::parse(doc);
    REQUIRE(j.is_array());
    std::set<uint64_t> reg_cycles;
    std::map<std::pair<uint64_t, uint64_t>, std::vector<std::pair<uint64_t, uint64_t>>> threads;
    for (const auto& e : j) {
        for (const char* k : {"ph", "pid", "tid", "name"}) CHECK(e.contains(k));
        if (e["ph"] != "X") continue;
        CHECK(e.contains("ts"));
        CHECK(e.contains("dur"));
        CHECK(e["dur"].get<uint64_t>() >= 1);
        if (e["cat"] == "control-reg") reg_cycles.insert(e["ts"].get<uint64_t>());
        const uint64_t ts = e["ts"], end = ts + e["dur"].get<uint64_t>();
        threads[{e["pid"], e["tid"]}].emplace_back(ts, end);
    }
    for (uint64_t c : {2u, 4u, 5u}) CHECK(reg_cycles.count(c));
    // Slices on one thread either nest or are disjoint.
    for (const auto& [key, slices] : threads)
        for (const auto& a : slices)
            for (const auto& b : slices) {
                const bool disjoint = a.second <= b.first || b.second <= a.first;
                const bool nested = (a.first <= b.first && b.second <= a.second) || (b.first <= a.first && a.second <= b.second);
                CHECK((disjoint || nested));
            }
    CHECK(doc == viz::timeline_emit(trace::span_extract(p.pt), updates, p.lowered.map));
}

TEST_CASE("empty program timeline has a single track") {
    const auto p = profile_fixture("empty.futil");
    const auto updates = viz::control_register_updates(p.sim.trace, p.lowered.map);
    CHECK(updates.empty());
    const auto j = nlohmann::json::parse(viz::timeline_emit(trace::span_extract(p.pt), updates, p.lowered.map));
    std::set<uint64_t> pids;
    for (const auto& e : j) {
        pids.insert(e["pid"].get<uint64_t>());
        if (e.contains("cat")) CHECK(e["cat"] != "control-reg");
    }
    CHECK(pids == std::set<uint64_t>{viz::track_id("main")});
}

TEST_CASE("fsm update cycles of the while loop") {
    const auto p = profile_fixture("while_comb.futil", "while_mem.json", true);
    std::vector<uint64_t> fsm;
    for (const auto& u : viz::control_register_updates(p.sim.trace, p.lowered.map))
        if (u.kind == passes::RegisterKind::Fsm) fsm.push_back(u.cycle);
    CHECK(fsm.size() == 3);
}

TEST_CASE("group statistics") {
    const auto p = profile_fixture("switch_par.futil", "mem1.json");
    const auto st = viz::stats(p.pt, trace::span_extract(p.pt));
    std::set<std::string> names;
    for (const auto& r : st.groups) {
        names.insert(r.group);
        CHECK(r.min <= r.avg);
        CHECK(r.avg <= r.max);
        CHECK(r.avg * r.times == doctest::Approx(r.total));
    }
    CHECK(names == std::set<std::string>{"main.read", "main.run_s1", "main.s1.bump", "main.write"});
    const std::string csv = viz::group_csv(st);
    CHECK(csv.rfind("Group,Min,Max,Avg,Times Active,Total\n", 0) == 0);
    CHECK(csv.find("main.read,1,1,1,1,1\n") != std::string::npos);
    CHECK(viz::stats_text(st).find("Control %") != std::string::npos);

    // Totals agree with the number of cycles each group node is present.
    for (const auto& r : st.groups) {
        uint64_t present = 0;
        const auto dot = r.group.rfind('.');
        const Node n = Node::group(r.group.substr(0, dot), r.group.substr(dot + 1));
        for (const auto& t : p.pt.trees) present += t.nodes.count(n);
        CHECK(present == r.total);
    }
}

TEST_CASE("statistics rows sort by total") {
    const auto p = profile_fixture("repeat100.futil");
    const auto st = viz::stats(p.pt, trace::span_extract(p.pt));
    REQUIRE(st.groups.size() == 3);
    CHECK(st.groups[0].group == "main.work");
    CHECK(st.groups[0].total == 300);
    CHECK(st.groups[1].group == "main.incr");
    CHECK(st.groups[1].times == 100);
    for (std::size_t i = 1; i < st.groups.size(); ++i) CHECK(st.groups[i - 1].total >= st.groups[i].total);
    REQUIRE_FALSE(st.cells.empty());
    CHECK(st.cells[0].cell == "main");
    CHECK(st.cells[0].active == p.sim.cycles);
    CHECK(st.cells[0].user + st.cells[0].control == st.cells[0].active);
}
