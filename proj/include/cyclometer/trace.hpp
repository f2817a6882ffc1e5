#pragma once

#include "cyclometer/calltree.hpp"
#include "cyclometer/passes.hpp"
#include "cyclometer/sim.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cyclometer::trace {

class TraceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

sim::SignalTrace parse_vcd(std::string_view doc);

struct ProfileTrace {
    std::vector<CallTree> trees;  // one per cycle
    uint64_t cycle_count = 0;
    passes::SourceMap map;        // context for labels, par arms and cell types
};

ProfileTrace reconstruct(const sim::SignalTrace& t, const passes::SourceMap& m);

// Violations of the call-tree rules; empty when the tree is well formed.
std::vector<std::string> check_tree_rules(const CallTree& tree);

struct CellOverhead {
    std::string cell;  // instance path
    uint64_t active = 0;
    uint64_t user = 0;
    uint64_t control = 0;  // active - user
};

struct OverheadReport {
    std::vector<CellOverhead> cells;  // sorted by instance path
    uint64_t active = 0;
    uint64_t user = 0;
    uint64_t control = 0;
};

OverheadReport overhead(const ProfileTrace& pt);

struct Span {
    std::vector<Node> path;  // root first, the node itself last
    uint64_t start = 0;      // first active cycle
    uint64_t end = 0;        // last active cycle, inclusive
    std::string thread;      // enclosing par arms, "" outside any par

    const Node& node() const { return path.back(); }
    uint64_t length() const { return end - start + 1; }
};

std::vector<Span> span_extract(const ProfileTrace& pt);

// Path of `n` from the root of `tree`, root first; empty when `n` is absent.
std::vector<Node> path_to(const CallTree& tree, const Node& n);

// Par-arm key for a root-to-node path; "" outside any par.
std::string thread_key(const std::vector<Node>& path, const passes::SourceMap& m);

}  // namespace cyclometer::trace
