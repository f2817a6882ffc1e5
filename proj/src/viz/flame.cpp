#include "cyclometer/viz.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cyclometer::viz {

Rational::Rational(uint64_t n, uint64_t d) : num(n), den(d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    const uint64_t g = std::gcd(n, d);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
}

Rational& Rational::operator+=(const Rational& o) {
    using u128 = unsigned __int128;
    const uint64_t g = std::gcd(den, o.den);
    const u128 d = static_cast<u128>(den / g) * o.den;
    const u128 n = static_cast<u128>(num) * (o.den / g) + static_cast<u128>(o.num) * (den / g);
    // Reduce in 128 bits before narrowing.
    u128 a = n, b = d;
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    const u128 r = a == 0 ? 1 : a;
    if (d / r > UINT64_MAX || n / r > UINT64_MAX) throw std::overflow_error("flame weight overflow");
    *this = Rational(static_cast<uint64_t>(n / r), static_cast<uint64_t>(d / r));
    return *this;
}

Rational Rational::operator/(uint64_t k) const {
    const uint64_t g = std::gcd(num, k);
    return Rational(num / g, den * (k / g));
}

std::string frame_label(const Node& n, const passes::SourceMap& m) {
    switch (n.kind) {
        case NodeKind::Cell: {
            auto dot = n.instance.rfind('.');
            return "cell:" + (dot == std::string::npos ? n.instance : n.instance.substr(dot + 1));
        }
        case NodeKind::Control: {
            std::string kind = "control";
            auto comp = m.cell_tree.find(n.instance);
            if (comp != m.cell_tree.end()) {
                auto blocks = m.control_blocks.find(comp->second);
                if (blocks != m.control_blocks.end())
                    for (const auto& b : blocks->second)
                        if (std::to_string(b.id) == n.name) kind = b.kind;
            }
            return "control:" + kind + "#" + n.name;
        }
        case NodeKind::Group:
            return "group:" + n.name;
        case NodeKind::Primitive:
            return "primitive:" + n.name;
    }
    return n.name;
}

std::vector<FlameStack> flame(const trace::ProfileTrace& pt) {
    std::map<std::vector<Node>, Rational> acc;
    for (const CallTree& tree : pt.trees) {
        std::map<Node, std::vector<Node>> kids;
        std::set<Node> has_parent;
        for (const auto& [p, c] : tree.edges) {
            kids[p].push_back(c);
            has_parent.insert(c);
        }
        std::vector<Node> roots;
        for (const auto& n : tree.nodes)
            if (!has_parent.count(n)) roots.push_back(n);
        if (roots.empty()) continue;

        std::vector<Node> path;
        auto visit = [&](auto&& self, const Node& n, const Rational& w) -> void {
            path.push_back(n);
            auto it = kids.find(n);
            if (it == kids.end() || it->second.empty()) {
                acc[path] += w;
            } else {
                const Rational share = w / it->second.size();
                for (const auto& c : it->second) self(self, c, share);
            }
            path.pop_back();
        };
        const Rational share = Rational(1) / roots.size();
        for (const auto& r : roots) visit(visit, r, share);
    }
    std::vector<FlameStack> out;
    out.reserve(acc.size());
    for (auto& [frames, w] : acc) out.push_back({frames, w});
    return out;
}

std::vector<uint64_t> millicycles(const std::vector<FlameStack>& stacks) {
    using u128 = unsigned __int128;
    std::vector<uint64_t> out(stacks.size());
    std::vector<std::pair<Rational, std::size_t>> rem;  // fractional millicycles
    Rational total;
    uint64_t floor_sum = 0;
    for (std::size_t i = 0; i < stacks.size(); ++i) {
        const Rational& w = stacks[i].weight;
        const u128 scaled = static_cast<u128>(w.num) * 1000;
        out[i] = static_cast<uint64_t>(scaled / w.den);
        floor_sum += out[i];
        rem.emplace_back(Rational(static_cast<uint64_t>(scaled % w.den), w.den), i);
        total += w;
    }
    const uint64_t target = static_cast<uint64_t>(static_cast<u128>(total.num) * 1000 / total.den);
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        return static_cast<u128>(a.first.num) * b.first.den > static_cast<u128>(b.first.num) * a.first.den;
    });
    for (std::size_t k = 0; floor_sum < target && k < rem.size(); ++k) {
        if (rem[k].first.num == 0) break;
        ++out[rem[k].second];
        ++floor_sum;
    }
    return out;
}

std::string folded_emit(const std::vector<FlameStack>& stacks, const passes::SourceMap& m) {
    const auto ms = millicycles(stacks);
    std::vector<std::pair<std::string, uint64_t>> lines;
    for (std::size_t i = 0; i < stacks.size(); ++i) {
        std::string path;
        for (const auto& f : stacks[i].frames) {
            if (!path.empty()) path += ';';
            path += frame_label(f, m);
        }
        lines.emplace_back(std::move(path), ms[i]);
    }
    std::sort(lines.begin(), lines.end());
    std::ostringstream os;
    for (const auto& [path, w] : lines) os << path << ' ' << w << '\n';
    return os.str();
}

namespace {

struct Frame {
    std::string label;
    NodeKind kind = NodeKind::Cell;
    uint64_t weight = 0;
    std::map<std::string, Frame> kids;
};

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* fill(NodeKind k) {
    switch (k) {
        case NodeKind::Cell: return "#9b59b6";
        case NodeKind::Control: return "#e74c3c";
        case NodeKind::Group: return "#f39c12";
        case NodeKind::Primitive: return "#f1c40f";
    }
    return "#cccccc";
}

int depth_of(const Frame& f) {
    int d = 0;
    for (const auto& [_, k] : f.kids) d = std::max(d, depth_of(k));
    return d + 1;
}

}  // namespace

std::string svg_emit(const std::vector<FlameStack>& stacks, const passes::SourceMap& m) {
    constexpr int kWidth = 1200;
    constexpr int kRow = 18;
    constexpr int kPad = 10;
    constexpr int kTitle = 30;

    const auto ms = millicycles(stacks);
    Frame root;
    for (std::size_t i = 0; i < stacks.size(); ++i) {
        root.weight += ms[i];
        Frame* cur = &root;
        for (const auto& n : stacks[i].frames) {
            Frame& next = cur->kids[frame_label(n, m)];
            next.label = frame_label(n, m);
            next.kind = n.kind;
            next.weight += ms[i];
            cur = &next;
        }
    }
    const int depth = depth_of(root) - 1;
    const int height = kTitle + depth * kRow + 2 * kPad;
    const double scale = root.weight == 0 ? 0.0 : static_cast<double>(kWidth - 2 * kPad) / static_cast<double>(root.weight);

    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "<?xml version=\"1.0\" standalone=\"no\"?>\n"
       << "<svg version=\"1.1\" width=\"" << kWidth << "\" height=\"" << height
       << "\" xmlns=\"http://www.w3.org/2000/svg\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">"
       << xml_escape(m.program.empty() ? "flame graph" : m.program) << " (" << root.weight / 1000 << " cycles)</text>\n";

    // Root at the bottom, children stacked upward.
    auto draw = [&](auto&& self, const Frame& f, double x, int level) -> void {
        const double w = static_cast<double>(f.weight) * scale;
        const int y = height - kPad - (level + 1) * kRow;
        const double cycles = static_cast<double>(f.weight) / 1000.0;
        os << "<g><title>" << xml_escape(f.label) << " (" << cycles << " cycles)</title>"
           << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << kRow - 1
           << "\" fill=\"" << fill(f.kind) << "\" rx=\"2\"/>";
        const std::size_t chars = static_cast<std::size_t>(w / 7.0);
        if (chars >= 3) {
            std::string text = f.label.size() <= chars ? f.label : f.label.substr(0, chars - 2) + "..";
            os << "<text x=\"" << x + 3 << "\" y=\"" << y + kRow - 5
               << "\" font-family=\"monospace\" font-size=\"11\">" << xml_escape(text) << "</text>";
        }
        os << "</g>\n";
        double cx = x;
        for (const auto& [_, k] : f.kids) {
            self(self, k, cx, level + 1);
            cx += static_cast<double>(k.weight) * scale;
        }
    };
    double x = kPad;
    for (const auto& [_, k] : root.kids) {
        draw(draw, k, x, 0);
        x += static_cast<double>(k.weight) * scale;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace cyclometer::viz
