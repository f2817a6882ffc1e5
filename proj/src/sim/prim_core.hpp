#pragma once

#include "cyclometer/sim.hpp"

namespace cyclometer::sim {

uint64_t mask(uint32_t width);

// Inputs and outputs follow the order of il::primitive_ports, split by direction.
void eval_core(const il::Primitive& p, const PrimState& s, const uint64_t* in, uint64_t* out);
void commit_core(const il::Primitive& p, PrimState& s, const uint64_t* in, const std::string& name);

// Orders signal names so that a scope's variables precede its sub-scopes,
// each sorted by name. Traces are kept in this order so VCD round-trips.
bool vcd_order_less(const std::string& a, const std::string& b);

}  // namespace cyclometer::sim
