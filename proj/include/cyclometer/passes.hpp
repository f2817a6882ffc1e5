#pragma once

#include "cyclometer/il.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclometer::passes {

class PassError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ProbeKind { GA, CG, CC, CP };

std::string_view probe_kind_name(ProbeKind k);

struct Probe {
    ProbeKind kind = ProbeKind::GA;
    std::string component;
    std::string parent;  // group the probe lives in
    std::string child;   // callee; empty for GA

    // GA: `{group}__{component}__GA`; calls: `{child}__{parent}__{component}__{KIND}`.
    std::string name() const;
    bool operator==(const Probe&) const = default;
};

// Inverse of Probe::name. Group and cell names may contain "__", so the split is
// resolved against the component's groups and cells.
std::optional<Probe> demangle_probe(std::string_view name, const il::Component& c);

struct ControlId {
    std::string component;
    uint64_t id = 0;
    std::string path;  // e.g. "main/seq/1/par/0/if"
    bool operator==(const ControlId&) const = default;
};

// One node of a component's control program as it stood just before lowering.
struct ControlBlock {
    uint64_t id = 0;
    std::string kind;  // seq, par, if, while, static_seq, static_par, enable, empty
    std::string path;
    std::optional<uint64_t> parent;
    std::optional<uint64_t> par_arm;  // index within the parent when the parent is a par
    std::string group;                // enable: the (wrapper) group enabled at this site
    std::string callee;               // enable: the group the wrapper forwards to
    bool operator==(const ControlBlock&) const = default;
};

enum class CompKind { Tdcc, Par, Region, Static, StaticEnable };

std::string_view comp_kind_name(CompKind k);
std::optional<CompKind> comp_kind_from_name(std::string_view s);

struct CompilationGroup {
    std::string component;
    std::string group;
    CompKind kind = CompKind::Tdcc;
    ControlId control;
    bool operator==(const CompilationGroup&) const = default;
};

enum class RegisterKind { Fsm, Pd, Counter };

std::string_view register_kind_name(RegisterKind k);

struct ControlRegister {
    std::string component;
    std::string name;
    RegisterKind kind = RegisterKind::Fsm;
    std::string group;                    // owning compilation group
    std::vector<uint64_t> update_states;  // fsm: states whose cycle is a control update
    bool operator==(const ControlRegister&) const = default;
};

struct SourceMap {
    std::string program;
    std::vector<Probe> probes;
    std::map<std::string, CompilationGroup> control_groups;  // "component.group" -> info
    std::vector<ControlRegister> control_registers;
    std::map<std::string, std::string> cell_tree;  // instance path -> component name
    std::map<std::string, std::vector<ControlBlock>> control_blocks;

    const CompilationGroup* find_group(std::string_view component, std::string_view group) const;
    bool operator==(const SourceMap&) const = default;
};

std::string serialize(const SourceMap& m);
SourceMap parse_source_map(std::string_view json_text);

// Attribute keys the lowering leaves on generated cells and groups.
namespace attr {
inline constexpr std::string_view kId = "id";
inline constexpr std::string_view kProtected = "protected";
inline constexpr std::string_view kProbe = "probe";
inline constexpr std::string_view kWrapper = "wrapper";
inline constexpr std::string_view kPromotable = "promotable";
inline constexpr std::string_view kExternal = "external";
inline constexpr std::string_view kTdcc = "tdcc";
inline constexpr std::string_view kPar = "par";
inline constexpr std::string_view kRegion = "region";
inline constexpr std::string_view kStatic = "static_sched";
inline constexpr std::string_view kStaticEnable = "static_enable";
inline constexpr std::string_view kFsm = "fsm";
inline constexpr std::string_view kPd = "pd";
inline constexpr std::string_view kCounter = "counter";
}  // namespace attr

// Compilation-group kind recorded on a lowered group, if it is one.
std::optional<CompKind> compilation_kind(const il::Group& g);

// Latency in cycles of a group, when statically known.
std::optional<uint64_t> group_latency(const il::Component& c, const il::Group& g);
// Latency of a static control block or an enable of a fixed-latency group.
std::optional<uint64_t> control_latency(const il::Component& c, const il::Control& ctl);

il::Program metadata_pass(il::Program p);
il::Program instrument(il::Program p);
il::Program rewrite_probe_done_guards(il::Program p);
il::Program static_promote(il::Program p);
// Removes combinational cells whose outputs are never read, unless @protected.
il::Program remove_dead_cells(il::Program p);

struct LowerOptions {
    bool instrument = false;  // instrument groups generated by lowering
};

struct Lowered {
    il::Program program;
    SourceMap map;
};

// Rewrites `while c with comb` loops into the cond-register form.
il::Program desugar_while_with(il::Program p, LowerOptions opts = {});

Lowered tdcc_lower(il::Program p, LowerOptions opts = {});

struct PipelineOptions {
    bool promote = false;
    bool instrument = true;
};

Lowered run_pipeline(const il::Program& p, PipelineOptions opts = {}, std::string program_name = "main");

// Instance path -> component name, rooted at "main".
std::map<std::string, std::string> cell_tree(const il::Program& p);

// Control blocks of a component with ids and source paths.
std::vector<ControlBlock> control_blocks(const il::Component& c);

}  // namespace cyclometer::passes
