#include "cyclometer/viz.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace cyclometer::viz {

using json = nlohmann::json;

uint64_t track_id(std::string_view instance) {
    // 32-bit FNV-1a, kept positive for viewers that read pids as signed ints.
    uint32_t h = 2166136261u;
    for (char c : instance) {
        h ^= static_cast<unsigned char>(c);
        h *= 16777619u;
    }
    return h & 0x7fffffffu;
}

std::vector<RegisterUpdate> control_register_updates(const sim::SignalTrace& t, const passes::SourceMap& m) {
    std::vector<RegisterUpdate> out;
    for (const auto& reg : m.control_registers) {
        if (reg.kind == passes::RegisterKind::Counter) continue;
        for (const auto& [inst, comp] : m.cell_tree) {
            if (comp != reg.component) continue;
            const auto we = t.find(inst + "." + reg.name + ".write_en");
            const auto val = t.find(inst + "." + reg.name + ".out");
            if (!we || !val) continue;
            const auto we_s = t.series(*we);
            const auto val_s = t.series(*val);
            for (uint64_t c = 0; c < t.cycle_count; ++c) {
                if (!we_s[c]) continue;
                if (reg.kind == passes::RegisterKind::Fsm &&
                    std::find(reg.update_states.begin(), reg.update_states.end(), val_s[c]) == reg.update_states.end())
                    continue;
                out.push_back({inst, reg.name, reg.kind, c, val_s[c]});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const RegisterUpdate& a, const RegisterUpdate& b) {
        return std::tie(a.cycle, a.instance, a.reg) < std::tie(b.cycle, b.instance, b.reg);
    });
    return out;
}

namespace {

enum class SubTrack { Control, ControlReg, Group };

const char* category(SubTrack s) {
    switch (s) {
        case SubTrack::Control: return "control";
        case SubTrack::ControlReg: return "control-reg";
        case SubTrack::Group: return "group";
    }
    return "";
}

struct Event {
    std::string instance;
    SubTrack sub;
    std::string thread;
    std::string name;
    uint64_t ts;
    uint64_t dur;
    json args;
    std::size_t depth = 0;
};

}  // namespace

std::string timeline_emit(const std::vector<trace::Span>& spans, const std::vector<RegisterUpdate>& updates,
                          const passes::SourceMap& m) {
    std::vector<Event> events;
    for (const auto& s : spans) {
        const Node& n = s.node();
        std::string path;
        for (const auto& f : s.path) {
            if (!path.empty()) path += ';';
            path += frame_label(f, m);
        }
        json args = {{"path", path}};
        const std::size_t at = events.size();
        switch (n.kind) {
            case NodeKind::Cell:
                events.push_back({n.instance, SubTrack::Control, s.thread, n.instance, s.start, s.length(), args});
                break;
            case NodeKind::Control: {
                std::string label = frame_label(n, m);
                events.push_back({n.instance, SubTrack::Control, s.thread, label.substr(label.find(':') + 1), s.start,
                                  s.length(), args});
                break;
            }
            case NodeKind::Group:
            case NodeKind::Primitive:
                events.push_back({n.instance, SubTrack::Group, s.thread, n.name, s.start, s.length(), args});
                break;
        }
        if (events.size() > at) events.back().depth = s.path.size();
    }
    for (const auto& u : updates) {
        json args = {{"value", u.value}, {"kind", u.kind == passes::RegisterKind::Pd ? "pd" : "fsm"}};
        events.push_back({u.instance, SubTrack::ControlReg, "", u.reg, u.cycle, 1, args});
    }

    // Thread ids: one per (sub-track, par arm) within each cell track.
    std::map<std::string, std::map<std::pair<SubTrack, std::string>, uint64_t>> tids;
    for (const auto& e : events) tids[e.instance][{e.sub, e.thread}] = 0;
    for (auto& [inst, keys] : tids) {
        uint64_t next = 0;
        for (auto& [key, tid] : keys) tid = next++;
    }

    std::vector<json> out;
    for (const auto& [inst, keys] : tids) {
        const uint64_t pid = track_id(inst);
        out.push_back({{"name", "process_name"}, {"ph", "M"}, {"pid", pid}, {"tid", 0}, {"args", {{"name", inst}}}});
        for (const auto& [key, tid] : keys) {
            std::string tname = category(key.first);
            if (!key.second.empty()) tname += " " + key.second;
            out.push_back({{"name", "thread_name"}, {"ph", "M"}, {"pid", pid}, {"tid", tid}, {"args", {{"name", tname}}}});
        }
    }
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.ts, a.instance, a.sub, a.thread, b.dur, a.depth, a.name) <
               std::tie(b.ts, b.instance, b.sub, b.thread, a.dur, b.depth, b.name);
    });
    for (const auto& e : events) {
        out.push_back({{"name", e.name},
                       {"cat", category(e.sub)},
                       {"ph", "X"},
                       {"ts", e.ts},
                       {"dur", e.dur},
                       {"pid", track_id(e.instance)},
                       {"tid", tids[e.instance][{e.sub, e.thread}]},
                       {"args", e.args}});
    }
    std::string doc = "[\n";
    for (std::size_t i = 0; i < out.size(); ++i) {
        doc += out[i].dump();
        doc += i + 1 < out.size() ? ",\n" : "\n";
    }
    doc += "]\n";
    return doc;
}

}  // namespace cyclometer::viz
