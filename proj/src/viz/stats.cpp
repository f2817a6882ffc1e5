#include "cyclometer/viz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cyclometer::viz {

namespace {

struct Durations {
    uint64_t min = UINT64_MAX;
    uint64_t max = 0;
    uint64_t total = 0;
    uint64_t times = 0;

    void add(uint64_t d) {
        min = std::min(min, d);
        max = std::max(max, d);
        total += d;
        ++times;
    }
    double avg() const { return times == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(times); }
};

std::string num(double v) {
    if (std::fabs(v - std::round(v)) < 1e-9) return std::to_string(static_cast<uint64_t>(std::llround(v)));
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> w;
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (w.size() <= i) w.push_back(0);
            w[i] = std::max(w[i], r[i].size());
        }
    std::ostringstream os;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i > 0) line += "  ";
            // First column left-aligned, numbers right-aligned.
            const std::string pad(w[i] - r[i].size(), ' ');
            line += i == 0 ? r[i] + pad : pad + r[i];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
        if (k == 0) {
            std::size_t total = 0;
            for (auto x : w) total += x;
            os << std::string(total + 2 * (w.size() - 1), '-') << '\n';
        }
    }
    return os.str();
}

}  // namespace

Stats stats(const trace::ProfileTrace& pt, const std::vector<trace::Span>& spans) {
    std::map<std::string, Durations> groups, cells;
    for (const auto& s : spans) {
        const Node& n = s.node();
        if (n.kind == NodeKind::Group) groups[n.instance + "." + n.name].add(s.length());
        else if (n.kind == NodeKind::Cell) cells[n.instance].add(s.length());
    }
    Stats out;
    for (const auto& [name, d] : groups) out.groups.push_back({name, d.min, d.max, d.avg(), d.times, d.total});
    std::stable_sort(out.groups.begin(), out.groups.end(),
                     [](const GroupStatsRow& a, const GroupStatsRow& b) { return a.total > b.total; });

    const auto ov = trace::overhead(pt);
    for (const auto& c : ov.cells) {
        CellStatsRow r;
        r.cell = c.cell;
        r.active = c.active;
        r.user = c.user;
        r.control = c.control;
        r.control_pct = c.active == 0 ? 0.0 : 100.0 * static_cast<double>(c.control) / static_cast<double>(c.active);
        if (auto it = cells.find(c.cell); it != cells.end()) {
            r.activations = it->second.times;
            r.min = it->second.min;
            r.max = it->second.max;
            r.avg = it->second.avg();
        }
        out.cells.push_back(r);
    }
    std::stable_sort(out.cells.begin(), out.cells.end(),
                     [](const CellStatsRow& a, const CellStatsRow& b) { return a.active > b.active; });
    return out;
}

std::string group_csv(const Stats& s) {
    std::ostringstream os;
    os << "Group,Min,Max,Avg,Times Active,Total\n";
    for (const auto& r : s.groups)
        os << csv_field(r.group) << ',' << r.min << ',' << r.max << ',' << num(r.avg) << ',' << r.times << ','
           << r.total << '\n';
    return os.str();
}

std::string cell_csv(const Stats& s) {
    std::ostringstream os;
    os << "Cell,Activations,Min,Max,Avg,Active,User,Control,Control %\n";
    for (const auto& r : s.cells)
        os << csv_field(r.cell) << ',' << r.activations << ',' << r.min << ',' << r.max << ',' << num(r.avg) << ','
           << r.active << ',' << r.user << ',' << r.control << ',' << num(r.control_pct) << '\n';
    return os.str();
}

std::string stats_text(const Stats& s) {
    std::vector<std::vector<std::string>> g{{"Group", "Min", "Max", "Avg", "Times Active", "Total"}};
    for (const auto& r : s.groups)
        g.push_back({r.group, std::to_string(r.min), std::to_string(r.max), num(r.avg), std::to_string(r.times),
                     std::to_string(r.total)});
    std::vector<std::vector<std::string>> c{
        {"Cell", "Activations", "Min", "Max", "Avg", "Active", "User", "Control", "Control %"}};
    for (const auto& r : s.cells)
        c.push_back({r.cell, std::to_string(r.activations), std::to_string(r.min), std::to_string(r.max), num(r.avg),
                     std::to_string(r.active), std::to_string(r.user), std::to_string(r.control),
                     num(r.control_pct)});
    return table(g) + "\n" + table(c);
}

}  // namespace cyclometer::viz
