#pragma once

#include "cyclometer/passes.hpp"

namespace cyclometer::passes::detail {

// `base` if unused by any cell or group of `c`, else `base_1`, `base_2`, ...
std::string fresh_name(const il::Component& c, const std::string& base);

il::Literal lit(uint32_t width, uint64_t value);
// Smallest width (at least 1) that holds `max_value`.
uint32_t bits_for(uint64_t max_value);

il::Assignment assign(il::PortRef dst, il::Atom src, il::Guard guard = il::Guard::always());
il::Guard any_of(const std::vector<il::Guard>& gs);
il::Guard all_of(const std::vector<il::Guard>& gs);

il::Cell make_cell(std::string name, il::PrimKind kind, std::vector<uint64_t> params);

// The group a wrapper forwards to, if `g` is a wrapper.
std::optional<std::string> wrapper_callee(const il::Group& g);

// Adds GA and call probes for one group. Comb groups are ignored.
void instrument_group(const il::Program& p, il::Component& c, const std::string& group);

// Assigns @id to nodes lacking one, continuing after the largest existing id.
void ensure_ids(il::Control& root);
// One past the largest @id in the tree, or 0.
uint64_t next_id(const il::Control& root);

}  // namespace cyclometer::passes::detail
