#pragma once

#include "cyclometer/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cyclometer::viz {

// Non-negative exact fraction, always reduced.
struct Rational {
    uint64_t num = 0;
    uint64_t den = 1;

    Rational() = default;
    Rational(uint64_t n, uint64_t d = 1);

    Rational& operator+=(const Rational& o);
    Rational operator+(const Rational& o) const { return Rational(*this) += o; }
    Rational operator/(uint64_t k) const;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

struct FlameStack {
    std::vector<Node> frames;  // root first
    Rational weight;           // cycles
};

// Label of one frame in folded output, e.g. "cell:main" or "control:seq#1".
std::string frame_label(const Node& n, const passes::SourceMap& m);

// Per-cycle stacks aggregated over the run. Each cycle carries weight 1,
// split evenly among the children active under any node in that cycle.
std::vector<FlameStack> flame(const trace::ProfileTrace& pt);

// Weights in millicycles. Rounds with largest remainders, so the result sums
// to exactly 1000 * Σ weights when that total is a whole number of cycles.
std::vector<uint64_t> millicycles(const std::vector<FlameStack>& stacks);

std::string folded_emit(const std::vector<FlameStack>& stacks, const passes::SourceMap& m);
std::string svg_emit(const std::vector<FlameStack>& stacks, const passes::SourceMap& m);

struct RegisterUpdate {
    std::string instance;  // instance path of the owning component
    std::string reg;
    passes::RegisterKind kind = passes::RegisterKind::Fsm;
    uint64_t cycle = 0;
    uint64_t value = 0;  // register output during the update cycle
};

// Control-register update cycles: an fsm written while in one of its update
// states, or any pd write. Sorted by cycle, then instance and register.
std::vector<RegisterUpdate> control_register_updates(const sim::SignalTrace& t, const passes::SourceMap& m);

// Perfetto trace-event JSON (legacy array format). One cycle is one
// microsecond; every cell instance is a process.
std::string timeline_emit(const std::vector<trace::Span>& spans, const std::vector<RegisterUpdate>& updates,
                          const passes::SourceMap& m);

uint64_t track_id(std::string_view instance);

struct GroupStatsRow {
    std::string group;  // qualified, e.g. "main.s1.bump"
    uint64_t min = 0;
    uint64_t max = 0;
    double avg = 0;
    uint64_t times = 0;
    uint64_t total = 0;
};

struct CellStatsRow {
    std::string cell;
    uint64_t activations = 0;
    uint64_t min = 0;
    uint64_t max = 0;
    double avg = 0;
    uint64_t active = 0;
    uint64_t user = 0;
    uint64_t control = 0;
    double control_pct = 0;
};

struct Stats {
    std::vector<GroupStatsRow> groups;  // by total, descending
    std::vector<CellStatsRow> cells;    // by active cycles, descending
};

Stats stats(const trace::ProfileTrace& pt, const std::vector<trace::Span>& spans);

std::string group_csv(const Stats& s);
std::string cell_csv(const Stats& s);
std::string stats_text(const Stats& s);

}  // namespace cyclometer::viz
