#include "doctest.h"
#include "helpers.hpp"

using namespace cyclometer;
using testing::fixture;
using testing::slurp;
using Kind = il::Control::Kind;

namespace {

il::Program fig2() { return il::parse(slurp(fixture("switch_par.futil"))); }

bool has_cell(const il::Component& c, const std::string& name) { return c.find_cell(name) != nullptr; }

}  // namespace

TEST_CASE("metadata assigns pre-order ids and wraps enables") {
    const il::Program p = passes::metadata_pass(fig2());
    const il::Component& main = p.main();
    std::vector<uint64_t> ids;
    il::walk(main.control, [&](const il::Control& c) {
        if (c.kind == Kind::Empty) return;  // missing else branches
        REQUIRE(c.id());
        ids.push_back(*c.id());
    });
    CHECK(ids == std::vector<uint64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    // Every enable now targets a wrapper that forwards to the original group.
    il::walk(main.control, [&](const il::Control& c) {
        if (c.kind != Kind::Enable) return;
        const il::Group* w = main.find_group(c.group);
        REQUIRE(w);
        CHECK(w->attrs.has(passes::attr::kWrapper));
    });
    CHECK(passes::metadata_pass(p) == p);
}

TEST_CASE("instrumentation adds protected one-bit probes") {
    const il::Program p = passes::instrument(passes::metadata_pass(fig2()));
    const il::Component& main = p.main();
    for (const char* name : {"read__main__GA", "run_s1__main__GA", "s1__run_s1__main__CC", "r__read__main__CP",
                             "ans__write__main__CP"}) {
        CAPTURE(name);
        REQUIRE(has_cell(main, name));
        const il::Cell* c = main.find_cell(name);
        CHECK(c->attrs.has(passes::attr::kProtected));
        CHECK(c->attrs.has(passes::attr::kProbe));
        CHECK(c->primitive().kind == il::PrimKind::Wire);
        CHECK(c->primitive().width() == 1);
    }
    CHECK(has_cell(*p.find("sub_one"), "bump__sub_one__GA"));
    CHECK(has_cell(*p.find("sub_one"), "acc__bump__sub_one__CP"));
}

TEST_CASE("probe names demangle against the component") {
    const il::Program p = passes::instrument(passes::metadata_pass(fig2()));
    const il::Component& main = p.main();
    for (const passes::Probe& want : {passes::Probe{passes::ProbeKind::GA, "main", "read", ""},
                                      passes::Probe{passes::ProbeKind::CC, "main", "run_s2", "s2"},
                                      passes::Probe{passes::ProbeKind::CP, "main", "write", "ans"}}) {
        const auto got = passes::demangle_probe(want.name(), main);
        REQUIRE(got);
        CHECK(*got == want);
    }
    CHECK_FALSE(passes::demangle_probe("nothing__here__GA", main));
}

TEST_CASE("group latency inference") {
    const il::Program p = il::parse(testing::program(
        "r = std_reg(8);\n m = std_seq_mult(8, 2);\n @external mem = comb_mem_d1(8, 1, 1);",
        "group a { r.in = 8'd1; r.write_en = 1'd1; a[done] = r.done; }\n"
        "group b { m.left = 8'd2; m.right = 8'd3; m.go = !m.done ? 1'd1; r.in = m.out; r.write_en = m.done; "
        "b[done] = r.done; }\n"
        "static<3> group c { r.in = 8'd2; r.write_en = 1'd1; }\n"
        "group w { mem.addr0 = 1'd0; mem.write_data = 8'd4; mem.write_en = 1'd1; w[done] = mem.done; }\n"
        "group g { r.in = 8'd3; r.write_en = r.done ? 1'd1; g[done] = r.done; }",
        "seq { a; b; c; w; g; }"));
    const il::Component& c = p.main();
    CHECK(passes::group_latency(c, *c.find_group("a")) == 1u);
    CHECK_FALSE(passes::group_latency(c, *c.find_group("b")));
    CHECK(passes::group_latency(c, *c.find_group("c")) == 3u);
    CHECK(passes::group_latency(c, *c.find_group("w")) == 1u);
    CHECK_FALSE(passes::group_latency(c, *c.find_group("g")));
}

TEST_CASE("promotion makes known-latency runs static") {
    const il::Program seq5 = passes::static_promote(passes::metadata_pass(il::parse(slurp(fixture("seq5.futil")))));
    CHECK(seq5.main().control.kind == Kind::StaticSeq);
    CHECK(passes::control_latency(seq5.main(), seq5.main().control) == 5u);

    const il::Program mixed = passes::static_promote(passes::metadata_pass(il::parse(testing::program(
        "a = std_reg(8);\n b = std_reg(8);\n c = std_reg(8);\n m = std_seq_mult(8, 2);",
        "group ga { a.in = 8'd1; a.write_en = 1'd1; ga[done] = a.done; }\n"
        "group gm { m.left = 8'd2; m.right = 8'd3; m.go = !m.done ? 1'd1; a.in = m.out; a.write_en = m.done; "
        "gm[done] = a.done; }\n"
        "group gb { b.in = 8'd1; b.write_en = 1'd1; gb[done] = b.done; }\n"
        "group gc { c.in = 8'd1; c.write_en = 1'd1; gc[done] = c.done; }",
        "seq { ga; gm; gb; gc; }"))));
    const il::Control& top = mixed.main().control;
    REQUIRE(top.kind == Kind::Seq);
    REQUIRE(top.children.size() == 3);
    CHECK(top.children[0].kind == Kind::Enable);
    CHECK(top.children[1].kind == Kind::Enable);
    CHECK(top.children[2].kind == Kind::StaticSeq);
    CHECK(top.children[2].id());
}

TEST_CASE("dead combinational cells go, protected ones stay") {
    il::Program p = il::parse(testing::program(
        "r = std_reg(8);\n a = std_add(8);\n unused = std_add(8);\n @protected keep = std_add(8);",
        "group g { a.left = r.out; a.right = 8'd1; r.in = a.out; r.write_en = 1'd1; g[done] = r.done; }\n"
        "unused.left = 8'd1;\n keep.left = 8'd2;",
        "g;"));
    p = passes::remove_dead_cells(p);
    CHECK(has_cell(p.main(), "a"));
    CHECK(has_cell(p.main(), "keep"));
    CHECK_FALSE(has_cell(p.main(), "unused"));
    CHECK(p.main().continuous.size() == 1);
}

TEST_CASE("source map contents and serialization") {
    const auto l = passes::run_pipeline(fig2());
    const passes::SourceMap& m = l.map;
    CHECK(m.cell_tree == std::map<std::string, std::string>{
                             {"main", "main"}, {"main.s1", "sub_one"}, {"main.s2", "sub_two"}, {"main.s3", "sub_three"}});
    const auto& blocks = m.control_blocks.at("main");
    CHECK(blocks.size() == 10);
    int arms = 0;
    for (const auto& b : blocks)
        if (b.par_arm) {
            CHECK(b.kind == "if");
            CHECK(*b.parent == 2);
            ++arms;
        }
    CHECK(arms == 3);
    bool fsm = false, pd = false;
    for (const auto& r : m.control_registers) {
        fsm = fsm || r.kind == passes::RegisterKind::Fsm;
        pd = pd || r.kind == passes::RegisterKind::Pd;
    }
    CHECK(fsm);
    CHECK(pd);
    CHECK(passes::parse_source_map(passes::serialize(m)) == m);
    CHECK_THROWS(passes::parse_source_map("{\"program\": 3}"));
}

TEST_CASE("lowering leaves no control behind") {
    for (bool promote : {false, true}) {
        passes::PipelineOptions o;
        o.promote = promote;
        const auto l = passes::run_pipeline(il::parse(slurp(fixture("while_comb.futil"))), o);
        for (const auto& c : l.program.components) {
            CHECK(c.control.kind == Kind::Empty);
            for (const auto& g : c.groups) {
                const auto kind = passes::compilation_kind(g);
                if (kind) CHECK(l.map.find_group(c.name, g.name));
            }
        }
    }
}

TEST_CASE("while-with desugaring removes the comb condition") {
    il::Program p = passes::metadata_pass(il::parse(slurp(fixture("while_comb.futil"))));
    p = passes::desugar_while_with(p);
    bool with = false;
    il::walk(p.main().control, [&](const il::Control& c) { with = with || !c.with.empty(); });
    CHECK_FALSE(with);
    CHECK(has_cell(p.main(), "cond_reg"));
    CHECK(p.main().find_group("cond_group"));
}

TEST_CASE("uninstrumented pipeline has no probes") {
    passes::PipelineOptions o;
    o.instrument = false;
    const auto l = passes::run_pipeline(fig2(), o);
    CHECK(l.map.probes.empty());
    for (const auto& c : l.program.components)
        for (const auto& cell : c.cells) CHECK_FALSE(cell.attrs.has(passes::attr::kProbe));
}
