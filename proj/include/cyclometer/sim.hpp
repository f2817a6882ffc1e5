#pragma once

#include "cyclometer/calltree.hpp"
#include "cyclometer/il.hpp"

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclometer::sim {

class SimError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Memory contents keyed by cell path ("main.mem"). Keys without a '.' refer to main.
using MemoryImage = std::map<std::string, std::vector<uint64_t>>;

MemoryImage parse_memory_json(std::string_view text);
std::string memory_json(const MemoryImage& m);

// Value-change form of a per-cycle signal dump. Every signal has an entry at
// cycle 0; later entries appear only when the value changes.
struct SignalTrace {
    uint64_t cycle_count = 0;
    std::vector<std::string> names;
    std::vector<uint32_t> widths;
    std::vector<std::vector<std::pair<uint64_t, uint64_t>>> changes;

    std::optional<std::size_t> find(std::string_view name) const;
    uint64_t value(std::size_t signal, uint64_t cycle) const;
    uint64_t value(std::string_view name, uint64_t cycle) const;
    // Every cycle's value, length cycle_count.
    std::vector<uint64_t> series(std::size_t signal) const;
    // Index from names to signals; rebuilt on demand.
    void reindex() const;
    bool operator==(const SignalTrace& o) const {
        return cycle_count == o.cycle_count && names == o.names && widths == o.widths && changes == o.changes;
    }

  private:
    mutable std::map<std::string, std::size_t, std::less<>> index_;
};

struct GroundTruth {
    std::vector<CallTree> trees;                         // one per cycle
    std::vector<std::set<std::string>> active_groups;    // "instance.group", every group with go high
    std::vector<std::set<std::string>> active_cells;     // instance paths with go high
    std::vector<std::set<std::string>> active_control;   // "instance.group" for compilation groups
};

struct SimOptions {
    uint64_t max_cycles = 10'000'000;
    bool ground_truth = true;
};

struct SimResult {
    SignalTrace trace;
    GroundTruth truth;
    MemoryImage memories;  // final contents of every memory
    uint64_t cycles = 0;
};

SimResult simulate(const il::Program& lowered, const MemoryImage& mem_init = {}, SimOptions opts = {});

void write_vcd(const SignalTrace& t, std::ostream& out);
std::string write_vcd(const SignalTrace& t);

// One clock edge of a stateful primitive, exposed for unit testing.
struct PrimState {
    uint64_t out = 0;
    uint64_t count = 0;  // seq_mult progress
    std::vector<uint64_t> mem;
};
struct PrimIO {
    std::map<std::string, uint64_t> in;   // input ports
    std::map<std::string, uint64_t> out;  // output ports
};
// Computes combinational outputs from `state` and `io.in`.
void primitive_eval(const il::Primitive& p, const PrimState& state, PrimIO& io);
// Applies the clock edge given the settled inputs.
void primitive_commit(const il::Primitive& p, PrimState& state, const PrimIO& io);

}  // namespace cyclometer::sim
