#include "dltl/reward_machine.hpp"

#include <map>
#include <set>
#include <sstream>

namespace dltl {

namespace {

struct Cube {
    Letter value, care;  // bits in `care` must equal `value`
    auto operator<=>(const Cube&) const = default;
};

bool covers(const Cube& c, Letter l) { return (l & c.care) == c.value; }

// Prime implicants by iterated merging, then a greedy cover.
std::vector<Cube> cover(const std::vector<Letter>& letters, std::size_t nprops) {
    const Letter full = nprops == 0 ? 0 : static_cast<Letter>((std::size_t{1} << nprops) - 1);
    std::set<Cube> current;
    for (Letter l : letters) current.insert({l, full});
    std::set<Cube> primes;
    while (!current.empty()) {
        std::set<Cube> merged, used;
        for (auto it = current.begin(); it != current.end(); ++it)
            for (auto jt = std::next(it); jt != current.end(); ++jt) {
                if (it->care != jt->care) continue;
                Letter diff = it->value ^ jt->value;
                if (diff && !(diff & (diff - 1))) {
                    merged.insert({it->value & ~diff, it->care & ~diff});
                    used.insert(*it);
                    used.insert(*jt);
                }
            }
        for (const auto& c : current)
            if (!used.count(c)) primes.insert(c);
        current = std::move(merged);
    }
    std::vector<Cube> chosen;
    std::set<Letter> left(letters.begin(), letters.end());
    while (!left.empty()) {
        const Cube* best = nullptr;
        std::size_t best_n = 0;
        for (const auto& c : primes) {
            std::size_t n = 0;
            for (Letter l : left) n += covers(c, l);
            if (n > best_n) best = &c, best_n = n;
        }
        chosen.push_back(*best);
        for (auto it = left.begin(); it != left.end();)
            it = covers(*best, *it) ? left.erase(it) : std::next(it);
    }
    return chosen;
}

std::string guard(const Alphabet& a, const std::vector<Letter>& letters) {
    if (letters.size() == a.size()) return "true";
    std::string out;
    for (const auto& c : cover(letters, a.num_props())) {
        if (!out.empty()) out += " | ";
        std::string cube;
        for (std::size_t i = 0; i < a.num_props(); ++i) {
            if (!(c.care >> i & 1)) continue;
            if (!cube.empty()) cube += " & ";
            cube += (c.value >> i & 1 ? "" : "!") + a.props()[i];
        }
        out += cube;
    }
    return out;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const RewardMachine& r) {
    std::ostringstream os;
    os << "digraph reward_machine {\n  rankdir=LR;\n  node [shape=circle];\n";
    os << "  start [shape=point];\n  start -> a" << r.initial() << ";\n";
    for (StateId q = 0; q < r.num_states(); ++q)
        os << "  a" << q << " [label=\"a" << q << "\", tooltip=\"" << escape(describe(r.payload(q))) << "\"];\n";
    for (StateId q = 0; q < r.num_states(); ++q) {
        std::map<std::pair<StateId, Rational>, std::vector<Letter>> groups;
        for (Letter l = 0; l < r.num_letters(); ++l) groups[{r.next(q, l), r.reward(q, l)}].push_back(l);
        for (const auto& [key, letters] : groups)
            os << "  a" << q << " -> a" << key.first << " [label=\"" << escape(guard(r.alphabet(), letters)) << ", "
               << key.second.to_string() << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace dltl
