#include "srm/vm.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace srm {

std::string outcome_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Halted: return "halted";
        case OutcomeKind::StepBudgetExhausted: return "step-budget-exhausted";
        case OutcomeKind::OracleDiverged: return "oracle-diverged";
        case OutcomeKind::ResourceExceeded: return "resource-exceeded";
        case OutcomeKind::NoCycleAtBudget: return "no-cycle-at-budget";
    }
    return "?";
}

namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t config_hash(const Configuration& c) {
    uint64_t h = mix64(c.line);
    for (const HfSet& r : c.registers) h = mix64(h ^ r.hash());
    return h;
}

}  // namespace

StepResult step(const Program& p, const Configuration& c, const OracleTable& o,
                const RunLimits& limits) {
    const size_t reg_count = register_count(p);
    if (c.registers.size() != reg_count)
        throw MalformedValue("configuration has " + std::to_string(c.registers.size()) +
                             " registers, program needs " + std::to_string(reg_count));
    if (c.line < 1 || c.line > p.lines.size()) return StepResult{StepResult::Kind::Halt, {}};

    const Instruction& ins = p.lines[c.line - 1];
    Configuration next = c;
    next.line = c.line + 1;
    auto& r = next.registers;
    switch (ins.op) {
        case Op::Zero:
            r[ins.i] = HfSet();
            break;
        case Op::Add:
            r[ins.j] = add_element(c.registers[ins.i], c.registers[ins.j]);
            break;
        case Op::Copy:
            r[ins.j] = c.registers[ins.i];
            break;
        case Op::Take:
            if (auto least = take_least(c.registers[ins.i])) r[ins.j] = *least;
            break;
        case Op::Remove:
            r[ins.j] = diff_singleton(c.registers[ins.i], c.registers[ins.j]);
            break;
        case Op::IfEmptyGoto:
            if (c.registers[ins.i].is_empty()) next.line = ins.k;
            break;
        case Op::IfMemberGoto:
            if (c.registers[ins.j].contains(c.registers[ins.i])) next.line = ins.k;
            break;
        case Op::Pow:
            if (c.registers[ins.i].size() > limits.max_powerset_input)
                throw ResourceExceeded("POW input of size " +
                                       std::to_string(c.registers[ins.i].size()) +
                                       " exceeds the limit of " +
                                       std::to_string(limits.max_powerset_input));
            r[ins.j] = powerset(c.registers[ins.i], uint64_t(1) << limits.max_powerset_input);
            break;
        case Op::Oracle: {
            auto res = o.lookup(c.registers[ins.i]);
            if (!res) return StepResult{StepResult::Kind::OracleUndefined, {}};
            r[ins.j] = *res;
            break;
        }
        case Op::Goto:
        case Op::IfEqualGoto:
            throw MalformedValue("macro instruction reached the machine");
    }
    return StepResult{StepResult::Kind::Next, std::move(next)};
}

namespace {

Configuration liminf_config(const std::vector<Configuration>& entries, size_t cycle_begin) {
    // The liminf of an eventually periodic sequence: the least line that
    // recurs, and per register the intersection of its cycle values.
    Configuration out;
    out.line = entries[cycle_begin].line;
    for (size_t t = cycle_begin; t < entries.size(); ++t)
        out.line = std::min(out.line, entries[t].line);
    const size_t reg_count = entries[cycle_begin].registers.size();
    out.registers.reserve(reg_count);
    for (size_t n = 0; n < reg_count; ++n) {
        std::vector<HfSet> vals;
        vals.reserve(entries.size() - cycle_begin);
        for (size_t t = cycle_begin; t < entries.size(); ++t)
            vals.push_back(entries[t].registers[n]);
        out.registers.push_back(liminf_cycle(vals));
    }
    return out;
}

}  // namespace

RunResult run(const Program& p, const std::vector<HfSet>& inputs, const OracleTable& o,
              const RunLimits& limits) {
    if (minimal_flavor(p.lines) > p.flavor)
        throw FlavorViolation("program uses opcodes beyond the " + flavor_name(p.flavor) +
                              " flavor");
    for (const Instruction& ins : p.lines)
        if (ins.op == Op::Goto || ins.op == Op::IfEqualGoto)
            throw MalformedValue("macro instruction in a core program");
    const size_t reg_count = register_count(p);
    if (inputs.size() > reg_count)
        throw MalformedValue("program has " + std::to_string(reg_count) + " registers but got " +
                             std::to_string(inputs.size()) + " inputs");

    RunResult res;
    Configuration c;
    c.line = 1;
    c.registers = inputs;
    c.registers.resize(reg_count);
    res.trace.entries.push_back(c);

    // Repetition detection is per segment: hash of every configuration
    // since the last omega-jump, confirmed by full comparison.
    std::unordered_map<uint64_t, std::vector<size_t>> seen;
    size_t segment_start = 0;
    seen[config_hash(c)].push_back(0);

    uint64_t steps = 0;
    uint64_t jumps = 0;
    auto& entries = res.trace.entries;

    for (;;) {
        StepResult sr;
        try {
            sr = step(p, c, o, limits);
        } catch (const ResourceExceeded&) {
            res.outcome.kind = OutcomeKind::ResourceExceeded;
            res.outcome.steps = steps;
            res.outcome.limit_jumps = jumps;
            return res;
        }
        if (sr.kind == StepResult::Kind::Halt) {
            res.outcome.kind = OutcomeKind::Halted;
            res.outcome.value = c.registers[0];
            res.outcome.steps = steps;
            res.outcome.limit_jumps = jumps;
            return res;
        }
        if (sr.kind == StepResult::Kind::OracleUndefined) {
            res.outcome.kind = OutcomeKind::OracleDiverged;
            res.outcome.at_line = c.line;
            res.outcome.steps = steps;
            res.outcome.limit_jumps = jumps;
            return res;
        }
        if (steps >= limits.max_steps) {
            res.outcome.kind = OutcomeKind::NoCycleAtBudget;
            res.outcome.steps = steps;
            res.outcome.limit_jumps = jumps;
            return res;
        }
        ++steps;
        c = std::move(sr.next);

        const uint64_t h = config_hash(c);
        size_t repeat_at = entries.size();
        if (auto it = seen.find(h); it != seen.end()) {
            for (size_t idx : it->second) {
                if (entries[idx] == c) {
                    repeat_at = idx;
                    break;
                }
            }
        }
        if (repeat_at == entries.size()) {
            entries.push_back(c);
            seen[h].push_back(entries.size() - 1);
            continue;
        }

        // The segment is eventually periodic, hence truly divergent:
        // perform an omega-jump.
        if (jumps >= limits.max_limit_jumps) {
            res.outcome.kind = OutcomeKind::StepBudgetExhausted;
            res.outcome.steps = steps;
            res.outcome.limit_jumps = jumps;
            return res;
        }
        ++jumps;
        res.trace.markers.push_back(OmegaMarker{
            entries.size() - 1,      // marker sits after the last entry
            repeat_at - segment_start,
            entries.size() - repeat_at,
        });
        c = liminf_config(entries, repeat_at);
        entries.push_back(c);
        segment_start = entries.size() - 1;
        seen.clear();
        seen[config_hash(c)].push_back(segment_start);
    }
}

bool check_trace(const Program& p, const Trace& t, const OracleTable& o,
                 const RunLimits& limits) {
    if (t.entries.empty()) return false;
    const size_t reg_count = register_count(p);
    for (const Configuration& c : t.entries)
        if (c.registers.size() != reg_count) return false;
    if (t.entries[0].line != 1) return false;

    size_t next_marker = 0;
    size_t segment_start = 0;
    for (size_t idx = 0; idx < t.entries.size(); ++idx) {
        const bool at_marker =
            next_marker < t.markers.size() && t.markers[next_marker].after_entry == idx;
        StepResult sr;
        try {
            sr = step(p, t.entries[idx], o, limits);
        } catch (const Error&) {
            return false;
        }
        if (at_marker) {
            const OmegaMarker& m = t.markers[next_marker];
            const size_t cycle_begin = segment_start + m.prefix_len;
            if (cycle_begin > idx || idx + 1 >= t.entries.size()) return false;
            if (m.period != idx + 1 - cycle_begin) return false;
            // The cycle must actually close...
            if (sr.kind != StepResult::Kind::Next || !(sr.next == t.entries[cycle_begin]))
                return false;
            // ...and the next entry must be its liminf configuration.
            std::vector<Configuration> window(t.entries.begin() +
                                                  static_cast<std::ptrdiff_t>(cycle_begin),
                                              t.entries.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
            if (!(t.entries[idx + 1] == liminf_config(window, 0))) return false;
            segment_start = idx + 1;
            ++next_marker;
            continue;
        }
        if (idx + 1 == t.entries.size()) {
            // A complete computation ends in a configuration with no
            // successor, with every marker accounted for.
            return next_marker == t.markers.size() && sr.kind == StepResult::Kind::Halt;
        }
        if (sr.kind != StepResult::Kind::Next || !(sr.next == t.entries[idx + 1])) return false;
    }
    return false;
}

HfSet run_as_function(const Program& p, const std::vector<HfSet>& args, const OracleTable& o,
                      const RunLimits& limits) {
    RunResult res = run(p, args, o, limits);
    if (res.outcome.kind != OutcomeKind::Halted)
        throw VmFailure("run did not halt: " + outcome_name(res.outcome.kind));
    return res.outcome.value;
}

std::string print_trace(const Trace& t) {
    std::string out;
    size_t next_marker = 0;
    for (size_t idx = 0; idx < t.entries.size(); ++idx) {
        const Configuration& c = t.entries[idx];
        out += std::to_string(c.line);
        for (const HfSet& r : c.registers) {
            out += " ; ";
            out += print_hf(r);
        }
        out += '\n';
        if (next_marker < t.markers.size() && t.markers[next_marker].after_entry == idx) {
            out += "@omega prefix=" + std::to_string(t.markers[next_marker].prefix_len) +
                   " period=" + std::to_string(t.markers[next_marker].period) + '\n';
            ++next_marker;
        }
    }
    return out;
}

namespace {

size_t parse_nat_field(const std::string& line, size_t& pos, const char* what) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    size_t start = pos;
    uint64_t v = 0;
    while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) {
        v = v * 10 + static_cast<uint64_t>(line[pos] - '0');
        if (v > 100'000'000) throw ParseError(pos, std::string(what) + " out of range");
        ++pos;
    }
    if (pos == start) throw ParseError(pos, std::string("expected ") + what);
    return static_cast<size_t>(v);
}

}  // namespace

Trace parse_trace(const std::string& text) {
    Trace t;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t pos = 0;
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) continue;
        if (line[pos] == '@') {
            if (line.compare(pos, 7, "@omega ") != 0)
                throw ParseError(line_no, "unknown marker");
            if (t.entries.empty()) throw ParseError(line_no, "marker before any configuration");
            pos += 7;
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (line.compare(pos, 7, "prefix=") != 0) throw ParseError(line_no, "expected prefix=");
            pos += 7;
            OmegaMarker m;
            m.after_entry = t.entries.size() - 1;
            m.prefix_len = parse_nat_field(line, pos, "prefix");
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (line.compare(pos, 7, "period=") != 0) throw ParseError(line_no, "expected period=");
            pos += 7;
            m.period = parse_nat_field(line, pos, "period");
            if (!t.markers.empty() && t.markers.back().after_entry == m.after_entry)
                throw ParseError(line_no, "two markers after one configuration");
            t.markers.push_back(m);
            continue;
        }
        Configuration c;
        c.line = parse_nat_field(line, pos, "line number");
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos >= line.size()) break;
            if (line[pos] != ';') throw ParseError(line_no, "expected ';'");
            ++pos;
            std::string_view rest(line);
            c.registers.push_back(parse_hf_at(rest, pos));
        }
        t.entries.push_back(std::move(c));
    }
    return t;
}

}  // namespace srm
