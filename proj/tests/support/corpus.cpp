#include "corpus.hpp"

#include "json.hpp"

#include <map>
#include <sstream>

namespace cyclometer::testing {

namespace {

bool is_par(const Node& n, const passes::SourceMap& m) {
    if (n.kind != NodeKind::Control) return false;
    const std::string label = viz::frame_label(n, m);
    return label.rfind("control:par#", 0) == 0 || label.rfind("control:static_par#", 0) == 0;
}

}  // namespace

std::vector<std::string> par_window_violations(const trace::ProfileTrace& pt,
                                               const std::vector<viz::FlameStack>& stacks) {
    std::vector<std::string> out;
    // Expected weight of each par node: its share of every cycle it is active.
    std::map<Node, viz::Rational> expected;
    std::map<Node, uint64_t> window;
    for (const auto& tree : pt.trees) {
        std::map<Node, uint64_t> fanout;
        for (const auto& [p, c] : tree.edges) ++fanout[p];
        for (const auto& n : tree.nodes) {
            if (!is_par(n, pt.map)) continue;
            uint64_t den = 1;
            const auto path = trace::path_to(tree, n);
            for (std::size_t i = 0; i + 1 < path.size(); ++i) den *= fanout[path[i]];
            expected[n] += viz::Rational(1, den);
            ++window[n];
        }
    }
    const auto ms = viz::millicycles(stacks);
    for (const auto& [par, want] : expected) {
        viz::Rational got;
        uint64_t milli = 0, count = 0;
        for (std::size_t i = 0; i < stacks.size(); ++i) {
            bool under = false;
            for (const auto& f : stacks[i].frames) under = under || f == par;
            if (!under) continue;
            got += stacks[i].weight;
            milli += ms[i];
            ++count;
        }
        std::ostringstream os;
        if (!(got == want)) {
            os << "par " << par.str() << " weighs " << got.num << "/" << got.den << ", expected " << want.num << "/"
               << want.den << " over a window of " << window[par];
            out.push_back(os.str());
            continue;
        }
        const uint64_t exact = want.num * 1000 / want.den;
        const uint64_t diff = milli > exact ? milli - exact : exact - milli;
        if (diff > count) {
            os << "par " << par.str() << " rounds to " << milli << " millicycles, expected about " << exact;
            out.push_back(os.str());
        }
    }
    return out;
}

std::map<std::string, uint64_t> timeline_group_totals(const std::string& timeline_json) {
    const auto doc = nlohmann::json::parse(timeline_json);
    std::map<uint64_t, std::string> process;
    for (const auto& e : doc)
        if (e.at("ph") == "M" && e.at("name") == "process_name")
            process[e.at("pid").get<uint64_t>()] = e.at("args").at("name").get<std::string>();
    std::map<std::string, uint64_t> totals;
    for (const auto& e : doc) {
        if (e.at("ph") != "X" || e.at("cat") != "group") continue;
        const std::string path = e.at("args").at("path").get<std::string>();
        const std::string last = path.substr(path.rfind(';') + 1);
        if (last.rfind("group:", 0) != 0) continue;
        const std::string inst = process.at(e.at("pid").get<uint64_t>());
        totals[inst + "." + e.at("name").get<std::string>()] += e.at("dur").get<uint64_t>();
    }
    return totals;
}

CorpusResult check_program(const std::string& text, bool promote) {
    CorpusResult r;
    const il::Program p = il::parse(text);

    passes::PipelineOptions with, without;
    with.promote = without.promote = promote;
    without.instrument = false;
    const auto lowered = passes::run_pipeline(p, with);
    const auto plain = passes::run_pipeline(p, without);

    const auto res = sim::simulate(lowered.program);
    sim::SimOptions quick;
    quick.ground_truth = false;
    const auto base = sim::simulate(plain.program, {}, quick);
    r.cycles = res.cycles;
    r.cycles_uninstrumented = base.cycles;
    r.neutral = res.cycles == base.cycles;
    if (!r.neutral)
        r.problems.push_back("instrumented " + std::to_string(res.cycles) + " vs plain " + std::to_string(base.cycles));

    const auto trace = trace::parse_vcd(sim::write_vcd(res.trace));
    const auto map = passes::parse_source_map(passes::serialize(lowered.map));
    const auto pt = trace::reconstruct(trace, map);

    r.oracle = pt.trees.size() == res.truth.trees.size();
    for (std::size_t c = 0; r.oracle && c < pt.trees.size(); ++c) {
        if (!(pt.trees[c] == res.truth.trees[c])) {
            r.oracle = false;
            r.problems.push_back("reconstruction differs from ground truth at cycle " + std::to_string(c));
        }
    }
    r.rules = true;
    for (std::size_t c = 0; c < pt.trees.size(); ++c) {
        const auto v = trace::check_tree_rules(pt.trees[c]);
        if (!v.empty()) {
            r.rules = false;
            r.problems.push_back("cycle " + std::to_string(c) + ": " + v.front());
            break;
        }
    }

    const auto stacks = viz::flame(pt);
    uint64_t milli = 0;
    for (auto m : viz::millicycles(stacks)) milli += m;
    r.flame_conserved = milli == 1000 * r.cycles;
    if (!r.flame_conserved)
        r.problems.push_back("flame weighs " + std::to_string(milli) + " millicycles over " + std::to_string(r.cycles) +
                             " cycles");

    const auto spans = trace::span_extract(pt);
    const auto st = viz::stats(pt, spans);
    const auto tl = timeline_group_totals(viz::timeline_emit(spans, viz::control_register_updates(trace, map), map));
    std::map<std::string, uint64_t> from_stats;
    for (const auto& row : st.groups) from_stats[row.group] = row.total;
    r.stats_match_timeline = from_stats == tl;
    if (!r.stats_match_timeline) r.problems.push_back("group stats disagree with timeline durations");

    const auto pv = par_window_violations(pt, stacks);
    r.par_normalized = pv.empty();
    r.problems.insert(r.problems.end(), pv.begin(), pv.end());
    return r;
}

}  // namespace cyclometer::testing
