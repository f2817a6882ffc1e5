#pragma once

#include <compare>
#include <set>
#include <string>
#include <utility>

namespace cyclometer {

enum class NodeKind { Cell, Control, Group, Primitive };

std::string_view node_kind_name(NodeKind k);

// A node of a per-cycle call tree. `instance` is the cell path ("main.s1");
// `name` is empty for cells, the decimal control id for control blocks, and
// the group or primitive cell name otherwise.
struct Node {
    NodeKind kind = NodeKind::Cell;
    std::string instance;
    std::string name;

    static Node cell(std::string path) { return {NodeKind::Cell, std::move(path), {}}; }
    static Node control(std::string inst, uint64_t id) { return {NodeKind::Control, std::move(inst), std::to_string(id)}; }
    static Node group(std::string inst, std::string g) { return {NodeKind::Group, std::move(inst), std::move(g)}; }
    static Node primitive(std::string inst, std::string c) { return {NodeKind::Primitive, std::move(inst), std::move(c)}; }

    std::string str() const;
    auto operator<=>(const Node&) const = default;
    bool operator==(const Node&) const = default;
};

struct CallTree {
    std::set<Node> nodes;
    std::set<std::pair<Node, Node>> edges;  // parent -> child

    void add_edge(const Node& parent, const Node& child) {
        nodes.insert(parent);
        nodes.insert(child);
        edges.emplace(parent, child);
    }
    bool operator==(const CallTree&) const = default;
};

}  // namespace cyclometer
