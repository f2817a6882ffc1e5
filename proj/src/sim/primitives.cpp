#include "cyclometer/sim.hpp"

#include "prim_core.hpp"

namespace cyclometer::sim {

uint64_t mask(uint32_t width) { return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1; }

void eval_core(const il::Primitive& p, const PrimState& s, const uint64_t* in, uint64_t* out) {
    const uint64_t m = mask(p.width());
    switch (p.kind) {
        case il::PrimKind::Register:
            out[0] = s.out;
            out[1] = in[1] & 1;
            return;
        case il::PrimKind::CombMemD1:
            out[0] = in[0] < s.mem.size() ? s.mem[in[0]] : 0;
            out[1] = in[2] & 1;
            return;
        case il::PrimKind::Adder:
            out[0] = (in[0] + in[1]) & m;
            return;
        case il::PrimKind::Subtractor:
            out[0] = (in[0] - in[1]) & m;
            return;
        case il::PrimKind::Eq:
            out[0] = in[0] == in[1];
            return;
        case il::PrimKind::Lt:
            out[0] = in[0] < in[1];
            return;
        case il::PrimKind::SeqMult:
            out[0] = s.out;
            // Registered: the done cycle is fixed by state alone, so `go = !done` settles.
            out[1] = s.count == p.params[1];
            return;
        case il::PrimKind::Constant:
            out[0] = p.params[1] & m;
            return;
        case il::PrimKind::Wire:
            out[0] = in[0] & m;
            return;
    }
}

void commit_core(const il::Primitive& p, PrimState& s, const uint64_t* in, const std::string& name) {
    const uint64_t m = mask(p.width());
    switch (p.kind) {
        case il::PrimKind::Register:
            if (in[1] & 1) s.out = in[0] & m;
            return;
        case il::PrimKind::CombMemD1:
            if (in[2] & 1) {
                if (in[0] >= s.mem.size())
                    throw SimError("write to " + name + " at address " + std::to_string(in[0]) + " is out of range (size " +
                                   std::to_string(s.mem.size()) + ")");
                s.mem[in[0]] = in[1] & m;
            }
            return;
        case il::PrimKind::SeqMult:
            if (s.count == p.params[1]) {
                s.count = 0;
            } else if (in[2] & 1) {
                if (s.count == 0) s.out = (in[0] * in[1]) & m;
                ++s.count;
            } else {
                s.count = 0;
            }
            return;
        default:
            return;
    }
}

namespace {

std::vector<std::string> port_names(const il::Primitive& p, il::Direction dir) {
    std::vector<std::string> out;
    for (const auto& spec : il::primitive_ports(p))
        if (spec.dir == dir) out.push_back(spec.name);
    return out;
}

std::vector<uint64_t> gather(const il::Primitive& p, const PrimIO& io) {
    std::vector<uint64_t> in;
    for (const auto& n : port_names(p, il::Direction::In)) {
        auto it = io.in.find(n);
        in.push_back(it == io.in.end() ? 0 : it->second);
    }
    in.push_back(0);  // keeps the pointer valid for primitives without inputs
    return in;
}

}  // namespace

void primitive_eval(const il::Primitive& p, const PrimState& state, PrimIO& io) {
    auto in = gather(p, io);
    auto names = port_names(p, il::Direction::Out);
    std::vector<uint64_t> out(names.size());
    eval_core(p, state, in.data(), out.data());
    for (std::size_t i = 0; i < names.size(); ++i) io.out[names[i]] = out[i];
}

void primitive_commit(const il::Primitive& p, PrimState& state, const PrimIO& io) {
    auto in = gather(p, io);
    commit_core(p, state, in.data(), std::string(il::primitive_name(p.kind)));
}

}  // namespace cyclometer::sim
