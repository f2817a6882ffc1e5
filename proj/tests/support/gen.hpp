#pragma once

#include <cstdint>
#include <string>

namespace cyclometer::testing {

struct GenOptions {
    int max_depth = 4;
    int max_groups = 12;  // groups in main
};

// Random well-formed program mixing seq/par/if/while, multi-cycle groups,
// sub-component calls, group-to-group calls and static groups. Every group
// writes its own register; no group is enabled in two par arms.
std::string random_program(uint64_t seed, GenOptions opts = {});

}  // namespace cyclometer::testing
