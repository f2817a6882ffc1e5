#pragma once

#include "cyclometer/viz.hpp"

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace cyclometer::cli {

class CliError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline const std::set<std::string> kAllEmits{"flame", "svg", "timeline", "stats", "summary"};

struct RunConfig {
    std::string input;  // IL source; may be empty when `vcd` is given
    bool promote = false;
    bool instrument = true;
    std::optional<std::string> mem;
    uint64_t max_cycles = 10'000'000;
    std::string out_dir = "out";
    std::optional<std::string> vcd;  // profile an existing trace with its .map.json sidecar
    std::set<std::string> emit = kAllEmits;
};

// Artifact base name: the input's file stem, or the trace's when profiling a VCD.
std::string run_name(const RunConfig& cfg);

// CYCLOMETER_OUT when set, otherwise cfg.out_dir.
std::string out_dir(const RunConfig& cfg);

// Sidecar path for a trace: "x.vcd" -> "x.map.json".
std::string sidecar_path(const std::string& vcd);

struct Run {
    std::string name;
    passes::SourceMap map;
    std::optional<il::Program> lowered;        // absent for external traces
    std::optional<sim::MemoryImage> memories;  // final contents, absent for external traces
    sim::SignalTrace trace;
    trace::ProfileTrace profile;
    trace::OverheadReport overhead;
};

passes::Lowered compile(const RunConfig& cfg);

// Compiles, simulates (or loads the external trace) and reconstructs.
Run run(const RunConfig& cfg);

struct NodeCycles {
    std::string label;  // frame labels joined by ';'
    uint64_t cycles = 0;
};

// Non-root nodes by cycles active, descending.
std::vector<NodeCycles> top_nodes(const Run& r, std::size_t n);

std::string summary_line(const trace::OverheadReport& o);

int cmd_profile(const RunConfig& cfg, std::ostream& out);
int cmd_compare(const RunConfig& a, const RunConfig& b, std::ostream& out);
int cmd_compile(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);

std::string compare_report(const Run& a, const Run& b, const std::string& strategy);

}  // namespace cyclometer::cli
