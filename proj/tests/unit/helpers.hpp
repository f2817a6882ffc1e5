#pragma once

#include "cyclometer/viz.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace cyclometer::testing {

inline std::string fixture(const std::string& name) { return std::string(CYCLOMETER_FIXTURES) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Profiled {
    passes::Lowered lowered;
    sim::SimResult sim;
    trace::ProfileTrace pt;
};

inline Profiled profile_text(const std::string& text, const sim::MemoryImage& mem = {}, bool promote = false) {
    passes::PipelineOptions o;
    o.promote = promote;
    Profiled p{passes::run_pipeline(il::parse(text), o), {}, {}};
    p.sim = sim::simulate(p.lowered.program, mem);
    p.pt = trace::reconstruct(p.sim.trace, p.lowered.map);
    return p;
}

inline Profiled profile_fixture(const std::string& prog, const std::string& mem = "", bool promote = false) {
    sim::MemoryImage m;
    if (!mem.empty()) m = sim::parse_memory_json(slurp(fixture(mem)));
    return profile_text(slurp(fixture(prog)), m, promote);
}

// Minimal main component around the given cells, wires and control.
inline std::string program(const std::string& cells, const std::string& wires, const std::string& control) {
    return "component main() -> () {\n  cells {\n" + cells + "\n  }\n  wires {\n" + wires + "\n  }\n  control {\n" +
           control + "\n  }\n}\n";
}

}  // namespace cyclometer::testing
