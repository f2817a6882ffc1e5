#include "cyclometer/sim.hpp"

#include "json.hpp"
#include "prim_core.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cyclometer {

std::string_view node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Cell: return "cell";
        case NodeKind::Control: return "control";
        case NodeKind::Group: return "group";
        case NodeKind::Primitive: return "primitive";
    }
    return "?";
}

std::string Node::str() const {
    switch (kind) {
        case NodeKind::Cell: return instance;
        case NodeKind::Control: return instance + "#" + name;
        case NodeKind::Group: return instance + "." + name;
        case NodeKind::Primitive: return instance + "." + name + "(primitive)";
    }
    return instance;
}

}  // namespace cyclometer

namespace cyclometer::sim {

namespace {

std::vector<std::string> split_dots(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find('.', start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) return out;
        start = pos + 1;
    }
}

}  // namespace

bool vcd_order_less(const std::string& a, const std::string& b) {
    auto pa = split_dots(a);
    auto pb = split_dots(b);
    std::size_t i = 0;
    while (i < pa.size() && i < pb.size() && pa[i] == pb[i]) ++i;
    if (i == pa.size() || i == pb.size()) return pa.size() < pb.size();
    const bool a_var = i + 1 == pa.size();
    const bool b_var = i + 1 == pb.size();
    if (a_var != b_var) return a_var;
    return pa[i] < pb[i];
}

std::optional<std::size_t> SignalTrace::find(std::string_view name) const {
    if (index_.size() != names.size()) reindex();
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void SignalTrace::reindex() const {
    index_.clear();
    for (std::size_t i = 0; i < names.size(); ++i) index_.emplace(names[i], i);
}

uint64_t SignalTrace::value(std::size_t signal, uint64_t cycle) const {
    const auto& ch = changes.at(signal);
    auto it = std::upper_bound(ch.begin(), ch.end(), cycle,
                               [](uint64_t c, const std::pair<uint64_t, uint64_t>& e) { return c < e.first; });
    if (it == ch.begin()) return 0;
    return std::prev(it)->second;
}

uint64_t SignalTrace::value(std::string_view name, uint64_t cycle) const {
    auto idx = find(name);
    if (!idx) throw std::out_of_range("no signal named " + std::string(name));
    return value(*idx, cycle);
}

std::vector<uint64_t> SignalTrace::series(std::size_t signal) const {
    std::vector<uint64_t> out(cycle_count, 0);
    const auto& ch = changes.at(signal);
    for (std::size_t i = 0; i < ch.size(); ++i) {
        uint64_t end = i + 1 < ch.size() ? ch[i + 1].first : cycle_count;
        for (uint64_t t = ch[i].first; t < end && t < cycle_count; ++t) out[t] = ch[i].second;
    }
    return out;
}

namespace {

std::string vcd_id(std::size_t n) {
    std::string s;
    do {
        s += static_cast<char>('!' + n % 94);
        n /= 94;
    } while (n > 0);
    return s;
}

std::string vcd_value(uint64_t v, uint32_t width, const std::string& id) {
    if (width == 1) return std::string(1, (v & 1) ? '1' : '0') + id;
    std::string bits;
    do {
        bits += (v & 1) ? '1' : '0';
        v >>= 1;
    } while (v);
    std::reverse(bits.begin(), bits.end());
    return "b" + bits + " " + id;
}

}  // namespace

void write_vcd(const SignalTrace& t, std::ostream& out) {
    std::vector<std::size_t> order(t.names.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vcd_order_less(t.names[a], t.names[b]); });

    out << "$date\n  1970-01-01T00:00:00\n$end\n";
    out << "$version\n  cyclometer\n$end\n";
    out << "$timescale 1ns $end\n";

    std::vector<std::string> ids(t.names.size());
    std::vector<std::string> open;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = order[k];
        ids[i] = vcd_id(k);
        auto parts = split_dots(t.names[i]);
        std::vector<std::string> scope(parts.begin(), parts.end() - 1);
        std::size_t common = 0;
        while (common < open.size() && common < scope.size() && open[common] == scope[common]) ++common;
        for (std::size_t j = open.size(); j > common; --j) out << "$upscope $end\n";
        for (std::size_t j = common; j < scope.size(); ++j) out << "$scope module " << scope[j] << " $end\n";
        open = scope;
        out << "$var wire " << t.widths[i] << " " << ids[i] << " " << parts.back() << " $end\n";
    }
    for (std::size_t j = open.size(); j > 0; --j) out << "$upscope $end\n";
    out << "$enddefinitions $end\n";

    // Merge the per-signal change lists by cycle.
    std::vector<std::size_t> pos(t.names.size(), 0);
    for (uint64_t cycle = 0; cycle < t.cycle_count; ++cycle) {
        out << "#" << cycle << "\n";
        if (cycle == 0) out << "$dumpvars\n";
        for (std::size_t i : order) {
            const auto& ch = t.changes[i];
            if (pos[i] < ch.size() && ch[pos[i]].first == cycle) {
                out << vcd_value(ch[pos[i]].second, t.widths[i], ids[i]) << "\n";
                ++pos[i];
            } else if (cycle == 0) {
                out << vcd_value(0, t.widths[i], ids[i]) << "\n";
            }
        }
        if (cycle == 0) out << "$end\n";
    }
    out << "#" << t.cycle_count << "\n";
    if (!out) throw SimError("failed to write VCD output");
}

std::string write_vcd(const SignalTrace& t) {
    std::ostringstream os;
    write_vcd(t, os);
    return os.str();
}

MemoryImage parse_memory_json(std::string_view text) {
    MemoryImage m;
    try {
        auto j = nlohmann::json::parse(text);
        if (!j.is_object()) throw SimError("memory image must be a JSON object");
        for (const auto& [k, v] : j.items()) {
            if (!v.is_array()) throw SimError("memory image for '" + k + "' must be an array");
            std::vector<uint64_t> data;
            for (const auto& x : v) {
                if (!x.is_number_integer()) throw SimError("memory image for '" + k + "' must hold integers");
                data.push_back(x.is_number_unsigned() ? x.get<uint64_t>() : static_cast<uint64_t>(x.get<int64_t>()));
            }
            m[k] = std::move(data);
        }
    } catch (const nlohmann::json::exception& e) {
        throw SimError(std::string("malformed memory image: ") + e.what());
    }
    return m;
}

std::string memory_json(const MemoryImage& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j.dump(2) + "\n";
}

}  // namespace cyclometer::sim
