#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "srm/asm.hpp"
#include "srm/errors.hpp"
#include "srm/hfset.hpp"

namespace srm {

// Machine state: the active line (1-based; any value outside the program
// halts) and one value per register.  The register vector has length
// register_count(p) for the program being run.
struct Configuration {
    size_t line = 1;
    std::vector<HfSet> registers;

    bool operator==(const Configuration&) const = default;
};

// Finite partial map backing the ORACLE instruction.
class OracleTable {
  public:
    OracleTable() = default;

    void set(const HfSet& arg, const HfSet& result) { map_.insert_or_assign(arg, result); }
    std::optional<HfSet> lookup(const HfSet& arg) const {
        auto it = map_.find(arg);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }
    size_t size() const { return map_.size(); }
    const std::unordered_map<HfSet, HfSet, HfHash>& entries() const { return map_; }

  private:
    std::unordered_map<HfSet, HfSet, HfHash> map_;
};

struct RunLimits {
    uint64_t max_steps = 1'000'000;       // finite steps per run
    uint64_t max_limit_jumps = 8;         // omega-jumps per run
    uint64_t max_powerset_input = 16;     // largest |R_i| POW accepts
};

enum class OutcomeKind : uint8_t {
    Halted,
    StepBudgetExhausted,  // a cycle closed but the omega-jump budget is spent
    OracleDiverged,       // oracle queried on an input outside its table
    ResourceExceeded,     // POW over budget
    NoCycleAtBudget,      // max_steps reached without any repeated configuration
};

std::string outcome_name(OutcomeKind k);

struct Outcome {
    OutcomeKind kind = OutcomeKind::Halted;
    HfSet value;              // Halted: final R_0
    uint64_t steps = 0;       // finite steps executed
    uint64_t limit_jumps = 0; // omega-jumps performed
    size_t at_line = 0;       // OracleDiverged: the querying line
};

// Records that an omega-jump happened right after entries[after_entry].
// Within the marker's segment (which starts at the entry following the
// previous marker), the cycle consists of the final `period` entries and
// is preceded by `prefix_len` entries; the entry after the marker is the
// liminf configuration of the cycle.
struct OmegaMarker {
    size_t after_entry = 0;
    size_t prefix_len = 0;
    size_t period = 0;

    bool operator==(const OmegaMarker&) const = default;
};

struct Trace {
    std::vector<Configuration> entries;
    std::vector<OmegaMarker> markers;  // ascending by after_entry

    bool operator==(const Trace&) const = default;
};

struct StepResult {
    enum class Kind : uint8_t { Next, Halt, OracleUndefined };
    Kind kind = Kind::Halt;
    Configuration next;  // meaningful only when kind == Next
};

// One transition of the machine.  Requires c.registers to match
// register_count(p) (MalformedValue otherwise).  Throws ResourceExceeded
// when POW is applied to a register larger than limits.max_powerset_input.
StepResult step(const Program& p, const Configuration& c, const OracleTable& o,
                const RunLimits& limits);

struct RunResult {
    Outcome outcome;
    Trace trace;
};

// Runs p from (1, inputs..., 0, ..., 0).  When a configuration repeats
// exactly, the run has entered an infinite loop and the machine performs
// an omega-jump: the line becomes the least line in the cycle and every
// register the intersection of its cycle values (the liminf of its
// characteristic functions), recorded as a marker in the trace.  Throws
// MalformedValue for too many inputs, FlavorViolation for a program whose
// opcodes exceed its declared flavor.
RunResult run(const Program& p, const std::vector<HfSet>& inputs, const OracleTable& o,
              const RunLimits& limits);

// True iff t is a complete halting computation of p: the first entry has
// the initial shape, adjacent entries inside each segment are related by
// step, each marker's cycle really closes and is followed by its liminf
// configuration, and the final entry has no successor.
bool check_trace(const Program& p, const Trace& t, const OracleTable& o,
                 const RunLimits& limits = RunLimits{});

// Runs p on args and projects the final R_0; any non-Halted outcome is
// thrown as VmFailure.
HfSet run_as_function(const Program& p, const std::vector<HfSet>& args, const OracleTable& o,
                      const RunLimits& limits);

// Line-oriented text: one configuration per line as
// `<line> ; <reg0> ; <reg1> ...` with HF literals, and omega-jump markers
// as `@omega prefix=<k> period=<p>` between configurations.
std::string print_trace(const Trace& t);
Trace parse_trace(const std::string& text);

}  // namespace srm
