#include "cyclometer/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace cyclometer::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw CliError("cannot write " + path.string());
}

fs::path prepare_out(const RunConfig& cfg) {
    fs::path dir = out_dir(cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CliError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

std::string pct(uint64_t part, uint64_t whole) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << (whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole));
    return os.str();
}

}  // namespace

std::string run_name(const RunConfig& cfg) {
    if (cfg.vcd) return fs::path(*cfg.vcd).stem().string();
    return fs::path(cfg.input).stem().string();
}

std::string out_dir(const RunConfig& cfg) {
    if (const char* env = std::getenv("CYCLOMETER_OUT"); env && *env) return env;
    return cfg.out_dir;
}

std::string sidecar_path(const std::string& vcd) {
    fs::path p(vcd);
    p.replace_extension(".map.json");
    return p.string();
}

passes::Lowered compile(const RunConfig& cfg) {
    if (cfg.input.empty()) throw CliError("no input program");
    const il::Program p = il::parse(read_file(cfg.input));
    if (auto diags = il::validate(p); !diags.empty()) {
        std::string msg = cfg.input + ": invalid program";
        for (const auto& d : diags)
            msg += "\n  " + std::to_string(d.loc.line) + ":" + std::to_string(d.loc.col) + ": " + d.message;
        throw CliError(msg);
    }
    passes::PipelineOptions opts;
    opts.promote = cfg.promote;
    opts.instrument = cfg.instrument;
    return passes::run_pipeline(p, opts, run_name(cfg));
}

Run run(const RunConfig& cfg) {
    Run r;
    r.name = run_name(cfg);
    if (cfg.vcd) {
        const std::string side = sidecar_path(*cfg.vcd);
        if (!fs::exists(side)) throw CliError("--vcd requires the source map sidecar " + side);
        r.map = passes::parse_source_map(read_file(side));
        r.trace = trace::parse_vcd(read_file(*cfg.vcd));
    } else {
        if (!cfg.instrument) throw CliError("profiling needs instrumentation; drop --no-instrument or use simulate");
        auto lowered = compile(cfg);
        sim::MemoryImage mem;
        if (cfg.mem) mem = sim::parse_memory_json(read_file(*cfg.mem));
        sim::SimOptions so;
        so.max_cycles = cfg.max_cycles;
        so.ground_truth = false;
        auto res = sim::simulate(lowered.program, mem, so);
        r.map = std::move(lowered.map);
        r.lowered = std::move(lowered.program);
        r.memories = std::move(res.memories);
        r.trace = std::move(res.trace);
    }
    r.profile = trace::reconstruct(r.trace, r.map);
    r.overhead = trace::overhead(r.profile);
    return r;
}

std::vector<NodeCycles> top_nodes(const Run& r, std::size_t n) {
    std::map<std::vector<Node>, uint64_t> counts;
    for (const auto& tree : r.profile.trees) {
        for (const auto& node : tree.nodes) {
            auto path = trace::path_to(tree, node);
            if (path.size() > 1) ++counts[path];
        }
    }
    std::vector<NodeCycles> out;
    for (const auto& [path, c] : counts) {
        std::string label;
        for (const auto& f : path) {
            if (!label.empty()) label += ';';
            label += viz::frame_label(f, r.map);
        }
        out.push_back({label, c});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.cycles > b.cycles; });
    if (out.size() > n) out.resize(n);
    return out;
}

std::string summary_line(const trace::OverheadReport& o) {
    std::ostringstream os;
    os << "total=" << o.active << " user=" << o.user << " control=" << o.control;
    return os.str();
}

int cmd_profile(const RunConfig& cfg, std::ostream& out) {
    Run r = run(cfg);
    const fs::path dir = prepare_out(cfg);
    const std::string base = r.name;
    if (!cfg.vcd) {
        write_file(dir / (base + ".vcd"), sim::write_vcd(r.trace));
        write_file(dir / (base + ".map.json"), passes::serialize(r.map));
    }
    const auto spans = trace::span_extract(r.profile);
    if (cfg.emit.count("flame") || cfg.emit.count("svg")) {
        const auto stacks = viz::flame(r.profile);
        if (cfg.emit.count("flame")) write_file(dir / (base + ".folded"), viz::folded_emit(stacks, r.map));
        if (cfg.emit.count("svg")) write_file(dir / (base + ".svg"), viz::svg_emit(stacks, r.map));
    }
    if (cfg.emit.count("timeline")) {
        const auto updates = viz::control_register_updates(r.trace, r.map);
        write_file(dir / (base + ".perfetto.json"), viz::timeline_emit(spans, updates, r.map));
    }
    if (cfg.emit.count("stats")) {
        const auto st = viz::stats(r.profile, spans);
        write_file(dir / (base + ".stats.csv"), viz::group_csv(st));
        write_file(dir / (base + ".cells.csv"), viz::cell_csv(st));
        write_file(dir / (base + ".stats.txt"), viz::stats_text(st));
    }
    if (cfg.emit.count("summary")) {
        out << summary_line(r.overhead) << '\n';
        for (const auto& n : top_nodes(r, 5)) out << "  " << n.cycles << "  " << n.label << '\n';
    }
    return 0;
}

std::string compare_report(const Run& a, const Run& b, const std::string& strategy) {
    const uint64_t ta = a.overhead.active, tb = b.overhead.active;
    const bool reduced = tb <= ta;
    const uint64_t mag = reduced ? ta - tb : tb - ta;
    const std::string sign = reduced ? "" : "-";
    std::ostringstream os;
    os << "A " << a.name << ": " << summary_line(a.overhead) << '\n';
    os << "B " << b.name << ": " << summary_line(b.overhead) << '\n';
    os << "delta=" << sign << mag << " (" << sign << pct(mag, ta) << "%)\n\n";

    const std::vector<std::string> head{"Strategy", "Cycles reduced", "% Cycles reduced"};
    const std::vector<std::string> row{strategy, sign + std::to_string(mag), sign + pct(mag, ta) + "%"};
    std::vector<std::size_t> w;
    for (std::size_t i = 0; i < head.size(); ++i) w.push_back(std::max(head[i].size(), row[i].size()));
    for (const auto* r : {&head, &row}) {
        std::string line;
        for (std::size_t i = 0; i < r->size(); ++i) {
            if (i > 0) line += "  ";
            const std::string pad(w[i] - (*r)[i].size(), ' ');
            line += i == 0 ? (*r)[i] + pad : pad + (*r)[i];
        }
        os << line << '\n';
    }
    return os.str();
}

int cmd_compare(const RunConfig& a, const RunConfig& b, std::ostream& out) {
    const Run ra = run(a);
    const Run rb = run(b);
    std::string strategy;
    if (run_name(a) != run_name(b)) strategy = run_name(b);
    if (a.promote != b.promote) strategy += std::string(strategy.empty() ? "" : " ") + (b.promote ? "+promote" : "-promote");
    if (strategy.empty()) strategy = "none";
    out << compare_report(ra, rb, strategy);
    return 0;
}

int cmd_compile(const RunConfig& cfg, std::ostream& out) {
    auto lowered = compile(cfg);
    const fs::path dir = prepare_out(cfg);
    const std::string base = run_name(cfg);
    write_file(dir / (base + ".lowered.futil"), il::print(lowered.program));
    write_file(dir / (base + ".map.json"), passes::serialize(lowered.map));
    out << "wrote " << (dir / (base + ".lowered.futil")).string() << " and " << (dir / (base + ".map.json")).string()
        << '\n';
    return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    auto lowered = compile(cfg);
    sim::MemoryImage mem;
    if (cfg.mem) mem = sim::parse_memory_json(read_file(*cfg.mem));
    sim::SimOptions so;
    so.max_cycles = cfg.max_cycles;
    so.ground_truth = false;
    auto res = sim::simulate(lowered.program, mem, so);
    const fs::path dir = prepare_out(cfg);
    const std::string base = run_name(cfg);
    write_file(dir / (base + ".vcd"), sim::write_vcd(res.trace));
    write_file(dir / (base + ".map.json"), passes::serialize(lowered.map));
    write_file(dir / (base + ".mem.json"), sim::memory_json(res.memories));
    out << "cycles=" << res.cycles << '\n';
    return 0;
}

}  // namespace cyclometer::cli
