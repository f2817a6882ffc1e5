#include "gen.hpp"

#include <random>
#include <sstream>
#include <vector>

namespace cyclometer::testing {

namespace {

constexpr const char* kLibrary = R"(component leaf_a() -> () {
  cells { acc = std_reg(32); }
  wires {
    group bump { acc.in = 32'd1; acc.write_en = 1'd1; bump[done] = acc.done; }
  }
  control { bump; }
}

component leaf_b() -> () {
  cells { a = std_reg(32); m = std_seq_mult(32, 2); }
  wires {
    group x { a.in = 32'd4; a.write_en = 1'd1; x[done] = a.done; }
    group y {
      m.left = a.out; m.right = 32'd3; m.go = !m.done ? 1'd1;
      a.in = m.out; a.write_en = m.done; y[done] = a.done;
    }
  }
  control { seq { x; y; } }
}

component nest() -> () {
  cells { inner = leaf_a(); t = std_reg(32); lt = std_lt(32); }
  wires {
    group call { inner.go = 1'd1; call[done] = inner.done; }
    group fin { t.in = 32'd9; t.write_en = 1'd1; fin[done] = t.done; }
    lt.left = t.out; lt.right = 32'd5;
  }
  control { seq { call; if lt.out { fin; } } }
}

)";

class Gen {
  public:
    Gen(uint64_t seed, GenOptions o) : rng_(seed), o_(o) {}

    std::string run() {
        std::string body;
        const int n = 1 + pick(3);
        if (n == 1) {
            body = control(1, false);
        } else {
            body = "seq {\n";
            for (int i = 0; i < n; ++i) body += control(2, false);
            body += "}\n";
        }
        std::ostringstream os;
        os << kLibrary << "component main() -> () {\n  cells {\n";
        for (const auto& c : cells_) os << "    " << c << "\n";
        os << "  }\n  wires {\n";
        for (const auto& w : wires_) os << "    " << w << "\n";
        os << "  }\n  control {\n" << body << "  }\n}\n";
        return os.str();
    }

  private:
    std::mt19937_64 rng_;
    GenOptions o_;
    int groups_ = 0;
    int next_ = 0;
    std::vector<std::string> cells_, wires_, regs_, reusable_;

    int pick(int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng_)); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    std::string id() { return std::to_string(next_++); }
    int budget() const { return o_.max_groups - groups_; }
    std::string konst(int hi = 9) { return "32'd" + std::to_string(pick(hi)); }

    // Source operand: a constant or an existing register plus a constant.
    std::string source(std::string& assigns) {
        if (regs_.empty() || chance(0.5)) return konst();
        const std::string add = "add" + id();
        cells_.push_back(add + " = std_add(32);");
        assigns += add + ".left = " + regs_[pick(static_cast<int>(regs_.size()))] + ".out; " + add + ".right = " +
                   konst() + "; ";
        return add + ".out";
    }

    std::string new_reg() {
        const std::string r = "r" + id();
        cells_.push_back(r + " = std_reg(32);");
        return r;
    }

    std::string plain_group() {
        const std::string g = "g" + id(), r = new_reg();
        std::string a;
        const std::string src = source(a);
        wires_.push_back("group " + g + " { " + a + r + ".in = " + src + "; " + r + ".write_en = 1'd1; " + g +
                         "[done] = " + r + ".done; }");
        regs_.push_back(r);
        ++groups_;
        return g;
    }

    std::string mult_group() {
        const std::string g = "g" + id(), r = new_reg(), m = "mul" + id();
        cells_.push_back(m + " = std_seq_mult(32, " + std::to_string(1 + pick(3)) + ");");
        std::string a;
        const std::string src = source(a);
        wires_.push_back("group " + g + " { " + a + m + ".left = " + src + "; " + m + ".right = 32'd3; " + m +
                         ".go = !" + m + ".done ? 1'd1; " + r + ".in = " + m + ".out; " + r + ".write_en = " + m +
                         ".done; " + g + "[done] = " + r + ".done; }");
        regs_.push_back(r);
        ++groups_;
        return g;
    }

    std::string call_group() {
        static const char* kinds[] = {"leaf_a", "leaf_b", "nest"};
        const std::string g = "g" + id(), s = "sub" + id();
        cells_.push_back(s + " = " + kinds[pick(3)] + "();");
        wires_.push_back("group " + g + " { " + s + ".go = 1'd1; " + g + "[done] = " + s + ".done; }");
        ++groups_;
        return g;
    }

    std::string group_call_group() {
        const std::string inner = chance(0.5) ? plain_group() : mult_group();
        const std::string g = "g" + id();
        wires_.push_back("group " + g + " { " + inner + "[go] = 1'd1; " + g + "[done] = " + inner + "[done]; }");
        ++groups_;
        return g;
    }

    std::string static_group() {
        const std::string g = "g" + id(), r = new_reg();
        std::string a;
        const std::string src = source(a);
        wires_.push_back("static<" + std::to_string(1 + pick(2)) + "> group " + g + " { " + a + r + ".in = " + src +
                         "; " + r + ".write_en = 1'd1; }");
        regs_.push_back(r);
        ++groups_;
        return g;
    }

    std::string leaf(bool in_par) {
        if (!in_par && !reusable_.empty() && (budget() < 1 || chance(0.12)))
            return reusable_[pick(static_cast<int>(reusable_.size()))] + ";\n";
        if (budget() < 1) return "empty;\n";
        std::string g;
        const int k = pick(10);
        if (k < 4) g = plain_group();
        else if (k < 6) g = mult_group();
        else if (k < 8) g = call_group();
        else if (k < 9 && budget() >= 2) g = group_call_group();
        else g = static_group();
        if (!in_par) reusable_.push_back(g);
        return g + ";\n";
    }

    // Comparison cell driven either continuously or through a comb group.
    std::pair<std::string, std::string> condition(int hi) {
        const std::string c = "cmp" + id();
        cells_.push_back(c + " = " + (chance(0.5) ? "std_lt" : "std_eq") + "(32);");
        const std::string left = regs_.empty() || chance(0.3) ? konst() : regs_[pick(static_cast<int>(regs_.size()))] + ".out";
        const std::string drive = c + ".left = " + left + "; " + c + ".right = " + konst(hi) + ";";
        if (budget() >= 1 && chance(0.4)) {
            const std::string cg = "cg" + id();
            wires_.push_back("comb group " + cg + " { " + drive + " }");
            ++groups_;
            return {c + ".out", cg};
        }
        wires_.push_back(drive);
        return {c + ".out", ""};
    }

    std::string loop(int depth, bool in_par) {
        const std::string n = id();
        const std::string i = "i" + n, lt = "lt" + n, add = "addi" + n;
        cells_.push_back(i + " = std_reg(32);");
        cells_.push_back(lt + " = std_lt(32);");
        cells_.push_back(add + " = std_add(32);");
        const std::string bound = "32'd" + std::to_string(1 + pick(3));
        wires_.push_back("group init" + n + " { " + i + ".in = 32'd0; " + i + ".write_en = 1'd1; init" + n +
                         "[done] = " + i + ".done; }");
        wires_.push_back("group incr" + n + " { " + add + ".left = " + i + ".out; " + add + ".right = 32'd1; " + i +
                         ".in = " + add + ".out; " + i + ".write_en = 1'd1; incr" + n + "[done] = " + i + ".done; }");
        groups_ += 2;
        std::string with;
        const std::string drive = lt + ".left = " + i + ".out; " + lt + ".right = " + bound + ";";
        if (budget() >= 1 && chance(0.4)) {
            with = " with cond" + n;
            wires_.push_back("comb group cond" + n + " { " + drive + " }");
            ++groups_;
        } else {
            wires_.push_back(drive);
        }
        std::string body = control(depth + 1, in_par);
        return "seq {\ninit" + n + ";\nwhile " + lt + ".out" + with + " {\nseq {\n" + body + "incr" + n + ";\n}\n}\n}\n";
    }

    std::string control(int depth, bool in_par) {
        if (depth >= o_.max_depth || budget() < 2) return leaf(in_par);
        const int k = pick(100);
        if (k < 35) return leaf(in_par);
        if (k < 55) {
            std::string s = "seq {\n";
            for (int i = 0, n = 2 + pick(2); i < n; ++i) s += control(depth + 1, in_par);
            return s + "}\n";
        }
        if (k < 70) {
            std::string s = "par {\n";
            for (int i = 0, n = 2 + pick(2); i < n; ++i) s += control(depth + 1, true);
            return s + "}\n";
        }
        if (k < 85) {
            auto [cond, with] = condition(6);
            std::string s = "if " + cond + (with.empty() ? "" : " with " + with) + " {\n" + control(depth + 1, in_par) + "}\n";
            if (chance(0.6)) s += "else {\n" + control(depth + 1, in_par) + "}\n";
            return s;
        }
        if (budget() >= 3) return loop(depth, in_par);
        return leaf(in_par);
    }
};

}  // namespace

std::string random_program(uint64_t seed, GenOptions opts) { return Gen(seed, opts).run(); }

}  // namespace cyclometer::testing
