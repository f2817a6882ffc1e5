#include "cyclometer/trace.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace cyclometer::trace {

namespace {

class Tokens {
  public:
    explicit Tokens(std::string_view s) : s_(s) {}

    std::optional<std::string_view> next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) return std::nullopt;
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    std::string_view expect(const char* what) {
        auto t = next();
        if (!t) throw TraceError(std::string("malformed VCD: unexpected end of input, expected ") + what);
        return *t;
    }

    // Skips to the matching $end.
    void skip_section() {
        for (;;) {
            auto t = next();
            if (!t) throw TraceError("malformed VCD: unterminated section");
            if (*t == "$end") return;
        }
    }

  private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

uint64_t parse_uint(std::string_view s, const char* what) {
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw TraceError(std::string("malformed VCD: bad ") + what + " '" + std::string(s) + "'");
    return v;
}

uint64_t parse_bits(std::string_view bits) {
    uint64_t v = 0;
    for (char c : bits) {
        v <<= 1;
        if (c == '1') v |= 1;
        else if (c != '0' && c != 'x' && c != 'X' && c != 'z' && c != 'Z')
            throw TraceError("malformed VCD: bad vector value 'b" + std::string(bits) + "'");
    }
    return v;
}

}  // namespace

sim::SignalTrace parse_vcd(std::string_view doc) {
    sim::SignalTrace t;
    Tokens tok(doc);
    std::vector<std::string> scope;
    std::unordered_map<std::string, std::vector<std::size_t>> by_code;
    bool defs_done = false;

    while (!defs_done) {
        auto w = tok.next();
        if (!w) throw TraceError("malformed VCD: missing $enddefinitions");
        if (*w == "$date" || *w == "$version" || *w == "$timescale" || *w == "$comment") {
            tok.skip_section();
        } else if (*w == "$scope") {
            tok.expect("scope type");
            scope.emplace_back(tok.expect("scope name"));
            if (tok.expect("$end") != "$end") throw TraceError("malformed VCD: $scope without $end");
        } else if (*w == "$upscope") {
            if (scope.empty()) throw TraceError("malformed VCD: $upscope without open scope");
            scope.pop_back();
            if (tok.expect("$end") != "$end") throw TraceError("malformed VCD: $upscope without $end");
        } else if (*w == "$var") {
            tok.expect("var type");
            auto width = parse_uint(tok.expect("var width"), "width");
            std::string code(tok.expect("id code"));
            std::string ref(tok.expect("reference"));
            for (auto x = tok.expect("$end"); x != "$end"; x = tok.expect("$end")) {
                // bit-select suffix such as [7:0]
            }
            if (width < 1 || width > 64) throw TraceError("unsupported VCD width " + std::to_string(width) + " for " + ref);
            std::string name;
            for (const auto& s : scope) name += s + ".";
            name += ref;
            by_code[code].push_back(t.names.size());
            t.names.push_back(std::move(name));
            t.widths.push_back(static_cast<uint32_t>(width));
        } else if (*w == "$enddefinitions") {
            tok.skip_section();
            defs_done = true;
        } else {
            throw TraceError("malformed VCD header near '" + std::string(*w) + "'");
        }
    }
    if (!scope.empty()) throw TraceError("malformed VCD: unclosed $scope");

    t.changes.assign(t.names.size(), {});
    for (auto& ch : t.changes) ch.emplace_back(0, 0);

    auto set = [&](std::string_view code, uint64_t v, uint64_t time) {
        auto it = by_code.find(std::string(code));
        if (it == by_code.end()) throw TraceError("VCD value change for undeclared id '" + std::string(code) + "'");
        for (std::size_t i : it->second) {
            auto& ch = t.changes[i];
            const uint64_t m = t.widths[i] >= 64 ? ~uint64_t{0} : (uint64_t{1} << t.widths[i]) - 1;
            v &= m;
            if (ch.back().first == time)
                ch.back().second = v;
            else if (ch.back().second != v)
                ch.emplace_back(time, v);
        }
    };

    std::optional<uint64_t> time;
    bool last_had_changes = false;
    while (auto w = tok.next()) {
        if ((*w)[0] == '#') {
            uint64_t now = parse_uint(w->substr(1), "timestamp");
            if (time && now <= *time) throw TraceError("non-monotonic VCD timestep #" + std::to_string(now));
            time = now;
            last_had_changes = false;
            continue;
        }
        if (*w == "$dumpvars" || *w == "$dumpall" || *w == "$dumpon" || *w == "$dumpoff" || *w == "$end") continue;
        if (*w == "$comment") {
            tok.skip_section();
            continue;
        }
        if (!time) throw TraceError("VCD value change before the first timestep");
        const char c = (*w)[0];
        if (c == 'b' || c == 'B') {
            uint64_t v = parse_bits(w->substr(1));
            set(tok.expect("id code"), v, *time);
        } else if (c == '0' || c == '1' || c == 'x' || c == 'X' || c == 'z' || c == 'Z') {
            set(w->substr(1), c == '1' ? 1 : 0, *time);
        } else {
            throw TraceError("unsupported VCD value change '" + std::string(*w) + "'");
        }
        last_had_changes = true;
    }
    if (!time) throw TraceError("VCD has no timesteps");
    t.cycle_count = last_had_changes ? *time + 1 : *time;
    // Drop changes that restate the previous value, such as a cycle-0 dump of zero.
    for (auto& ch : t.changes) {
        std::vector<std::pair<uint64_t, uint64_t>> norm;
        for (const auto& e : ch) {
            if (e.first >= t.cycle_count && !norm.empty()) break;
            if (norm.empty() || norm.back().second != e.second) norm.push_back(e);
        }
        ch = std::move(norm);
    }
    return t;
}

}  // namespace cyclometer::trace
