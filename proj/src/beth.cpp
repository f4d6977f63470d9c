#include "srm/beth.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <utility>

namespace srm {

namespace {

std::string sname(const RegularBethModel& m, size_t i) {
    if (i < m.states.size() && !m.states[i].name.empty()) return m.states[i].name;
    return "s" + std::to_string(i);
}

std::string atom_name(size_t k) { return "p" + std::to_string(k); }

// Least X containing the seed and closed under "all successors in X":
// membership means every infinite path from the state meets the seed.
std::vector<char> af_closure(const RegularBethModel& m, std::vector<char> x) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t s = 0; s < m.states.size(); ++s) {
            if (x[s] || m.states[s].successors.empty()) continue;
            bool all = true;
            for (size_t t : m.states[s].successors)
                if (!x[t]) { all = false; break; }
            if (all) { x[s] = 1; changed = true; }
        }
    }
    return x;
}

// reach[s][t] = t lies on some successor-path from s; reach[s][s] always.
std::vector<std::vector<char>> reachability(const RegularBethModel& m) {
    size_t n = m.states.size();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (size_t s = 0; s < n; ++s) {
        std::vector<size_t> queue{s};
        reach[s][s] = 1;
        while (!queue.empty()) {
            size_t v = queue.back();
            queue.pop_back();
            for (size_t t : m.states[v].successors)
                if (!reach[s][t]) {
                    reach[s][t] = 1;
                    queue.push_back(t);
                }
        }
    }
    return reach;
}

std::set<size_t> atoms_in_play(const RegularBethModel& m) {
    std::set<size_t> all;
    for (const auto& st : m.states) all.insert(st.atoms.begin(), st.atoms.end());
    return all;
}

void collect_subformulas(const PropFormula& f, std::vector<PropFormula>& out) {
    for (const PropFormula& g : out)
        if (g == f) return;
    switch (f.kind()) {
        case PropFormula::Kind::Atom:
        case PropFormula::Kind::Bot:
            break;
        case PropFormula::Kind::And:
        case PropFormula::Kind::Or:
        case PropFormula::Kind::Imp:
            collect_subformulas(f.lhs(), out);
            collect_subformulas(f.rhs(), out);
            break;
    }
    out.push_back(f);
}

size_t index_of(const std::vector<PropFormula>& subs, const PropFormula& f) {
    for (size_t i = 0; i < subs.size(); ++i)
        if (subs[i] == f) return i;
    throw MalformedValue("formula is not in the forcing table");
}

// Disjunction fixpoint with wave numbers: wave 0 = forces a disjunct,
// wave k = all successors reached strictly earlier.  SIZE_MAX = not forced.
std::vector<size_t> or_waves(const RegularBethModel& m, const std::vector<char>& base) {
    constexpr size_t none = std::numeric_limits<size_t>::max();
    std::vector<size_t> wave(m.states.size(), none);
    for (size_t s = 0; s < m.states.size(); ++s)
        if (base[s]) wave[s] = 0;
    for (size_t k = 1; true; ++k) {
        bool changed = false;
        for (size_t s = 0; s < m.states.size(); ++s) {
            if (wave[s] != none || m.states[s].successors.empty()) continue;
            bool all = true;
            for (size_t t : m.states[s].successors)
                if (wave[t] == none || wave[t] >= k) { all = false; break; }
            if (all) { wave[s] = k; changed = true; }
        }
        if (!changed) return wave;
    }
}

}  // namespace

std::vector<ModelDiagnostic> validate_model(const RegularBethModel& m) {
    std::vector<ModelDiagnostic> out;

    if (m.states.empty()) {
        out.push_back({"shape", 0, "model has no states"});
        return out;
    }
    if (m.root >= m.states.size())
        out.push_back({"shape", m.root, "root index is out of range"});
    for (size_t s = 0; s < m.states.size(); ++s) {
        if (m.states[s].successors.empty())
            out.push_back({"shape", s, sname(m, s) + " has no successors"});
        for (size_t t : m.states[s].successors)
            if (t >= m.states.size()) {
                out.push_back({"shape", s, sname(m, s) + " has a successor index out of range"});
                break;
            }
    }
    if (!out.empty()) return out;

    for (size_t s = 0; s < m.states.size(); ++s) {
        if (!m.states[s].fallible) continue;
        for (size_t t : m.states[s].successors)
            if (!m.states[t].fallible)
                out.push_back({"absorbing", s,
                               "fallible " + sname(m, s) + " has non-fallible successor " +
                                   sname(m, t)});
    }

    std::vector<char> fallible(m.states.size(), 0);
    for (size_t s = 0; s < m.states.size(); ++s) fallible[s] = m.states[s].fallible;
    std::vector<char> inevitable = af_closure(m, fallible);
    for (size_t s = 0; s < m.states.size(); ++s)
        if (inevitable[s] && !m.states[s].fallible)
            out.push_back({"path-closure", s,
                           "every path from " + sname(m, s) +
                               " meets a fallible state, but it is not fallible"});

    for (size_t s = 0; s < m.states.size(); ++s)
        for (size_t t : m.states[s].successors)
            for (size_t p : m.states[s].atoms)
                if (!m.states[t].atoms.count(p))
                    out.push_back({"monotonicity", s,
                                   atom_name(p) + " holds at " + sname(m, s) +
                                       " but not at successor " + sname(m, t)});

    std::set<size_t> all = atoms_in_play(m);
    for (size_t s = 0; s < m.states.size(); ++s) {
        if (!m.states[s].fallible) continue;
        for (size_t p : all)
            if (!m.states[s].atoms.count(p))
                out.push_back({"saturation", s,
                               "fallible " + sname(m, s) + " lacks " + atom_name(p)});
    }

    for (size_t p : all) {
        std::vector<char> carries(m.states.size(), 0);
        for (size_t s = 0; s < m.states.size(); ++s) carries[s] = m.states[s].atoms.count(p) > 0;
        std::vector<char> closed = af_closure(m, carries);
        for (size_t s = 0; s < m.states.size(); ++s)
            if (closed[s] && !carries[s])
                out.push_back({"bar-closure", s,
                               "every path from " + sname(m, s) + " meets " + atom_name(p) +
                                   ", but " + sname(m, s) + " lacks it"});
    }

    return out;
}

bool ForcingTable::forces(size_t state, const PropFormula& f) const {
    if (state >= states_) throw MalformedValue("state index is out of range");
    return forced_[index_of(subs_, f)][state];
}

ForcingTable force(const RegularBethModel& m, const PropFormula& a) {
    size_t n = m.states.size();
    std::vector<std::vector<char>> reach = reachability(m);

    ForcingTable table;
    table.states_ = n;
    collect_subformulas(a, table.subs_);
    table.forced_.resize(table.subs_.size());

    for (size_t i = 0; i < table.subs_.size(); ++i) {
        const PropFormula& f = table.subs_[i];
        std::vector<bool> row(n, false);
        switch (f.kind()) {
            case PropFormula::Kind::Bot:
                for (size_t s = 0; s < n; ++s) row[s] = m.states[s].fallible;
                break;
            case PropFormula::Kind::Atom:
                // Fallible states force every atom, listed or not.
                for (size_t s = 0; s < n; ++s)
                    row[s] = m.states[s].fallible || m.states[s].atoms.count(f.atom_index()) > 0;
                break;
            case PropFormula::Kind::And: {
                const auto& l = table.forced_[index_of(table.subs_, f.lhs())];
                const auto& r = table.forced_[index_of(table.subs_, f.rhs())];
                for (size_t s = 0; s < n; ++s) row[s] = l[s] && r[s];
                break;
            }
            case PropFormula::Kind::Or: {
                const auto& l = table.forced_[index_of(table.subs_, f.lhs())];
                const auto& r = table.forced_[index_of(table.subs_, f.rhs())];
                std::vector<char> base(n, 0);
                for (size_t s = 0; s < n; ++s) base[s] = l[s] || r[s];
                std::vector<char> x = af_closure(m, std::move(base));
                for (size_t s = 0; s < n; ++s) row[s] = x[s];
                break;
            }
            case PropFormula::Kind::Imp: {
                const auto& l = table.forced_[index_of(table.subs_, f.lhs())];
                const auto& r = table.forced_[index_of(table.subs_, f.rhs())];
                for (size_t s = 0; s < n; ++s) {
                    bool ok = true;
                    for (size_t w = 0; w < n; ++w)
                        if (reach[s][w] && l[w] && !r[w]) { ok = false; break; }
                    row[s] = ok;
                }
                break;
            }
        }
        table.forced_[i] = std::move(row);
    }
    return table;
}

bool check_valid_on(const RegularBethModel& m, const PropFormula& a) {
    return force(m, a).forces(m.root, a);
}

std::vector<BarEntry> bar_witness(const RegularBethModel& m, size_t state,
                                  const PropFormula& goal) {
    if (goal.kind() != PropFormula::Kind::Or)
        throw MalformedValue("bar witness needs a disjunction");
    if (state >= m.states.size()) throw MalformedValue("state index is out of range");

    ForcingTable t = force(m, goal);
    std::vector<char> base(m.states.size(), 0);
    std::vector<char> left(m.states.size(), 0);
    for (size_t s = 0; s < m.states.size(); ++s) {
        left[s] = t.forces(s, goal.lhs());
        base[s] = left[s] || t.forces(s, goal.rhs());
    }
    std::vector<size_t> wave = or_waves(m, base);
    if (wave[state] == std::numeric_limits<size_t>::max())
        throw NotForced(sname(m, state) + " does not force " + print_prop(goal));

    // Walk the fixpoint from `state`: stop at the first base state on each
    // branch.  Non-base members have all successors at strictly smaller
    // waves, so every branch bottoms out.
    std::vector<char> visited(m.states.size(), 0);
    std::vector<BarEntry> out;
    std::vector<size_t> stack{state};
    while (!stack.empty()) {
        size_t s = stack.back();
        stack.pop_back();
        if (visited[s]) continue;
        visited[s] = 1;
        if (base[s]) {
            out.push_back({s, left[s] ? 0 : 1});
            continue;
        }
        for (size_t u : m.states[s].successors) stack.push_back(u);
    }
    std::sort(out.begin(), out.end(),
              [](const BarEntry& a, const BarEntry& b) { return a.state < b.state; });
    return out;
}

RegularBethModel em_countermodel() {
    RegularBethModel m;
    m.states.push_back({"s0", {}, false, {1, 0}});
    m.states.push_back({"s1", {0}, false, {1}});
    m.root = 0;
    return m;
}

std::vector<PropFormula> hilbert_ipc_axioms() {
    PropFormula a = PropFormula::atom(0);
    PropFormula b = PropFormula::atom(1);
    PropFormula c = PropFormula::atom(2);
    using F = PropFormula;
    return {
        F::imp(a, F::imp(b, a)),
        F::imp(F::imp(a, F::imp(b, c)), F::imp(F::imp(a, b), F::imp(a, c))),
        F::imp(F::conj(a, b), a),
        F::imp(F::conj(a, b), b),
        F::imp(a, F::imp(b, F::conj(a, b))),
        F::imp(a, F::disj(a, b)),
        F::imp(b, F::disj(a, b)),
        F::imp(F::imp(a, c), F::imp(F::imp(b, c), F::imp(F::disj(a, b), c))),
        F::imp(F::bot(), a),
    };
}

namespace {

// Grows fallibility and atom sets until the soundness invariants hold.
// Every step only adds, so the loop reaches a fixpoint.
void repair(RegularBethModel& m, size_t atom_count) {
    bool changed = true;
    while (changed) {
        changed = false;

        for (size_t s = 0; s < m.states.size(); ++s)
            if (m.states[s].fallible)
                for (size_t t : m.states[s].successors)
                    if (!m.states[t].fallible) {
                        m.states[t].fallible = true;
                        changed = true;
                    }

        std::vector<char> fallible(m.states.size(), 0);
        for (size_t s = 0; s < m.states.size(); ++s) fallible[s] = m.states[s].fallible;
        std::vector<char> inevitable = af_closure(m, fallible);
        for (size_t s = 0; s < m.states.size(); ++s)
            if (inevitable[s] && !m.states[s].fallible) {
                m.states[s].fallible = true;
                changed = true;
            }

        for (size_t s = 0; s < m.states.size(); ++s)
            for (size_t t : m.states[s].successors)
                for (size_t p : m.states[s].atoms)
                    if (m.states[t].atoms.insert(p).second) changed = true;

        for (size_t p = 0; p < atom_count; ++p) {
            std::vector<char> carries(m.states.size(), 0);
            for (size_t s = 0; s < m.states.size(); ++s)
                carries[s] = m.states[s].atoms.count(p) > 0;
            std::vector<char> closed = af_closure(m, carries);
            for (size_t s = 0; s < m.states.size(); ++s)
                if (closed[s] && m.states[s].atoms.insert(p).second) changed = true;
        }

        std::set<size_t> all = atoms_in_play(m);
        for (size_t s = 0; s < m.states.size(); ++s)
            if (m.states[s].fallible)
                for (size_t p : all)
                    if (m.states[s].atoms.insert(p).second) changed = true;
    }
}

}  // namespace

RegularBethModel random_valid_model(uint64_t seed, size_t max_states, size_t max_branching,
                                    size_t atom_count) {
    std::mt19937_64 rng(seed);
    auto below = [&](size_t n) {
        return n == 0 ? size_t{0} : std::uniform_int_distribution<size_t>(0, n - 1)(rng);
    };
    auto coin = [&](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };

    size_t n = 1 + below(std::max<size_t>(max_states, 1));
    RegularBethModel m;
    m.root = 0;
    for (size_t s = 0; s < n; ++s) {
        RegularBethModel::State st;
        st.name = "s" + std::to_string(s);
        for (size_t p = 0; p < atom_count; ++p)
            if (coin(0.3)) st.atoms.insert(p);
        st.fallible = coin(0.2);
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        size_t k = 1 + below(std::min(std::max<size_t>(max_branching, 1), n));
        st.successors.assign(idx.begin(), idx.begin() + k);
        std::sort(st.successors.begin(), st.successors.end());
        m.states.push_back(std::move(st));
    }
    repair(m, atom_count);
    return m;
}

namespace {

// Minimal serialization for isomorphism dedup; assumes sorted successor
// lists and root fixed at index 0.
std::string canonical_form(const RegularBethModel& m) {
    size_t n = m.states.size();
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    std::string best;
    do {
        std::vector<size_t> inv(n);
        for (size_t i = 0; i < n; ++i) inv[perm[i]] = i;
        std::string cur;
        for (size_t slot = 0; slot < n; ++slot) {
            const auto& st = m.states[perm[slot]];
            cur += st.fallible ? "F" : "f";
            for (size_t p : st.atoms) cur += " a" + std::to_string(p);
            std::vector<size_t> succ;
            for (size_t t : st.successors) succ.push_back(inv[t]);
            std::sort(succ.begin(), succ.end());
            for (size_t t : succ) cur += " >" + std::to_string(t);
            cur += ";";
        }
        if (best.empty() || cur < best) best = cur;
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

}  // namespace

std::optional<RegularBethModel> countermodel_search(const PropFormula& a, size_t max_states,
                                                    size_t max_branching) {
    std::set<size_t> atom_set = prop_atoms(a);
    std::vector<size_t> atoms(atom_set.begin(), atom_set.end());
    if (atoms.size() >= 16) return std::nullopt;

    for (size_t n = 1; n <= max_states && n <= 16; ++n) {
        for (size_t b = 1; b <= std::min(max_branching, n); ++b) {
            std::vector<std::vector<size_t>> opts;
            for (uint32_t mask = 1; mask < (uint32_t{1} << n); ++mask) {
                if (static_cast<size_t>(std::popcount(mask)) > b) continue;
                std::vector<size_t> succ;
                for (size_t i = 0; i < n; ++i)
                    if (mask & (uint32_t{1} << i)) succ.push_back(i);
                opts.push_back(std::move(succ));
            }

            size_t atom_opts = size_t{1} << atoms.size();
            size_t per_state = opts.size() * atom_opts * 2;
            std::vector<size_t> choice(n, 0);
            std::set<std::string> seen;
            while (true) {
                RegularBethModel m;
                m.root = 0;
                bool uses_b = false;
                for (size_t s = 0; s < n; ++s) {
                    size_t c = choice[s];
                    bool fallible = c % 2;
                    size_t amask = (c / 2) % atom_opts;
                    const auto& succ = opts[c / 2 / atom_opts];
                    if (succ.size() == b) uses_b = true;
                    RegularBethModel::State st;
                    st.name = "s" + std::to_string(s);
                    st.fallible = fallible;
                    for (size_t i = 0; i < atoms.size(); ++i)
                        if (amask & (size_t{1} << i)) st.atoms.insert(atoms[i]);
                    st.successors = succ;
                    m.states.push_back(std::move(st));
                }

                if (b == 1 || uses_b) {
                    std::vector<std::vector<char>> reach = reachability(m);
                    bool all_reached = true;
                    for (size_t s = 0; s < n; ++s)
                        if (!reach[0][s]) { all_reached = false; break; }
                    if (all_reached && validate_model(m).empty() &&
                        seen.insert(canonical_form(m)).second && !check_valid_on(m, a))
                        return m;
                }

                size_t s = n;
                while (s > 0) {
                    --s;
                    if (++choice[s] < per_state) break;
                    choice[s] = 0;
                }
                if (s == 0 && choice[0] == 0) break;
            }
        }
    }
    return std::nullopt;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    size_t start = 0;
    while (true) {
        size_t comma = text.find(',', start);
        out.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) return out;
        start = comma + 1;
    }
}

size_t parse_atom_token(const std::string& tok, size_t lineno) {
    if (tok.size() < 2 || tok.size() > 7 || tok[0] != 'p' ||
        tok.find_first_not_of("0123456789", 1) != std::string::npos)
        throw ParseError(lineno, "bad atom token '" + tok + "'");
    return std::stoul(tok.substr(1));
}

}  // namespace

RegularBethModel parse_beth_model(std::string_view text) {
    struct Line {
        size_t no;
        std::vector<std::string> toks;
    };
    std::vector<Line> lines;
    {
        std::string owned(text);
        std::istringstream in(owned);
        std::string raw;
        size_t no = 0;
        while (std::getline(in, raw)) {
            ++no;
            if (size_t hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
            std::istringstream ls(raw);
            std::vector<std::string> toks;
            std::string tok;
            while (ls >> tok) toks.push_back(tok);
            if (!toks.empty()) lines.push_back({no, std::move(toks)});
        }
    }

    RegularBethModel m;
    std::map<std::string, size_t> index;
    std::optional<std::pair<std::string, size_t>> root;  // name, line

    for (const Line& ln : lines) {
        if (ln.toks[0] == "state") {
            if (ln.toks.size() != 5)
                throw ParseError(ln.no, "state line needs: name atoms= fallible= succ=");
            const std::string& name = ln.toks[1];
            if (index.count(name)) throw ParseError(ln.no, "duplicate state '" + name + "'");
            index[name] = m.states.size();
            m.states.push_back({name, {}, false, {}});
        } else if (ln.toks[0] == "root") {
            if (ln.toks.size() != 2) throw ParseError(ln.no, "root line needs one name");
            if (root) throw ParseError(ln.no, "duplicate root line");
            root = {ln.toks[1], ln.no};
        } else {
            throw ParseError(ln.no, "expected 'state' or 'root', got '" + ln.toks[0] + "'");
        }
    }

    size_t state_i = 0;
    for (const Line& ln : lines) {
        if (ln.toks[0] != "state") continue;
        RegularBethModel::State& st = m.states[state_i++];
        if (ln.toks[2].rfind("atoms=", 0) != 0) throw ParseError(ln.no, "expected atoms=<list>");
        if (ln.toks[3].rfind("fallible=", 0) != 0)
            throw ParseError(ln.no, "expected fallible=<0|1>");
        if (ln.toks[4].rfind("succ=", 0) != 0) throw ParseError(ln.no, "expected succ=<list>");

        for (const std::string& tok : split_list(ln.toks[2].substr(6)))
            st.atoms.insert(parse_atom_token(tok, ln.no));

        std::string flag = ln.toks[3].substr(9);
        if (flag != "0" && flag != "1") throw ParseError(ln.no, "bad fallible flag '" + flag + "'");
        st.fallible = flag == "1";

        std::vector<std::string> succ = split_list(ln.toks[4].substr(5));
        if (succ.empty()) throw ParseError(ln.no, "empty successor list");
        for (const std::string& nm : succ) {
            auto it = index.find(nm);
            if (it == index.end()) throw ParseError(ln.no, "unknown successor '" + nm + "'");
            st.successors.push_back(it->second);
        }
    }

    if (m.states.empty()) throw ParseError(lines.empty() ? 1 : lines.back().no, "no states");
    if (!root) throw ParseError(lines.back().no, "missing root line");
    auto it = index.find(root->first);
    if (it == index.end()) throw ParseError(root->second, "unknown root '" + root->first + "'");
    m.root = it->second;
    return m;
}

std::string print_beth_model(const RegularBethModel& m) {
    std::string out;
    for (size_t s = 0; s < m.states.size(); ++s) {
        const auto& st = m.states[s];
        out += "state " + sname(m, s) + " atoms=";
        bool first = true;
        for (size_t p : st.atoms) {
            if (!first) out += ",";
            out += atom_name(p);
            first = false;
        }
        out += " fallible=";
        out += st.fallible ? "1" : "0";
        out += " succ=";
        first = true;
        for (size_t t : st.successors) {
            if (!first) out += ",";
            out += sname(m, t);
            first = false;
        }
        out += "\n";
    }
    out += "root " + sname(m, m.root) + "\n";
    return out;
}

}  // namespace srm
