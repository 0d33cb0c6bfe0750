#include "dltl/errors.hpp"
#include "dltl/word.hpp"


#include <algorithm>
#include <set>

namespace dltl {

using nlohmann::json;

FiniteWord LassoWord::unroll(std::size_t length) const {
    if (cycle.empty()) throw ValidationError("lasso cycle must be nonempty");
    FiniteWord w;
    w.reserve(length);
    for (std::size_t i = 0; i < length; ++i)
        w.push_back(i < prefix.size() ? prefix[i] : cycle[(i - prefix.size()) % cycle.size()]);
    return w;
}

Alphabet::Alphabet(std::vector<std::string> props) : props_(std::move(props)) {
    std::sort(props_.begin(), props_.end());
    props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
    if (props_.size() > 16) throw ValidationError("too many propositions for an explicit alphabet");
}

int Alphabet::index_of(const std::string& p) const {
    auto it = std::lower_bound(props_.begin(), props_.end(), p);
    if (it == props_.end() || *it != p) return -1;
    return static_cast<int>(it - props_.begin());
}

Letter Alphabet::letter(const std::vector<std::string>& true_props) const {
    Letter l = 0;
    for (const auto& p : true_props) {
        int i = index_of(p);
        if (i < 0) throw ValidationError("proposition '" + p + "' not in alphabet");
        l |= Letter{1} << i;
    }
    return l;
}

std::vector<std::string> Alphabet::names(Letter l) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < props_.size(); ++i)
        if (l >> i & 1) out.push_back(props_[i]);
    return out;
}

bool Alphabet::holds(Letter l, const std::string& p) const {
    int i = index_of(p);
    return i >= 0 && (l >> i & 1);
}

Letter Alphabet::translate(Letter l, const Alphabet& other) const {
    Letter out = 0;
    for (std::size_t i = 0; i < other.props_.size(); ++i) {
        if (!(l >> i & 1)) continue;
        int j = index_of(other.props_[i]);
        if (j >= 0) out |= Letter{1} << j;
    }
    return out;
}

Alphabet Alphabet::merged(const Alphabet& other) const {
    auto all = props_;
    all.insert(all.end(), other.props_.begin(), other.props_.end());
    return Alphabet(std::move(all));
}

json word_to_json(const Alphabet& a, const FiniteWord& w) {
    json j = json::array();
    for (Letter l : w) j.push_back(a.names(l));
    return j;
}

FiniteWord word_from_json(const Alphabet& a, const json& j) {
    if (!j.is_array()) throw ValidationError("word must be a JSON array of letters");
    FiniteWord w;
    for (const auto& letter : j) {
        if (!letter.is_array()) throw ValidationError("letter must be an array of proposition names");
        std::vector<std::string> names;
        for (const auto& p : letter) {
            if (!p.is_string()) throw ValidationError("proposition names must be strings");
            names.push_back(p.get<std::string>());
        }
        w.push_back(a.letter(names));
    }
    return w;
}

json lasso_to_json(const Alphabet& a, const LassoWord& w) {
    return json{{"prefix", word_to_json(a, w.prefix)}, {"cycle", word_to_json(a, w.cycle)}};
}

LassoWord lasso_from_json(const Alphabet& a, const json& j) {
    if (!j.is_object() || !j.contains("cycle"))
        throw ValidationError("lasso must be an object with 'prefix' and 'cycle'");
    LassoWord w;
    if (j.contains("prefix")) w.prefix = word_from_json(a, j.at("prefix"));
    w.cycle = word_from_json(a, j.at("cycle"));
    if (w.cycle.empty()) throw ValidationError("lasso cycle must be nonempty");
    return w;
}

std::vector<std::string> props_in_json(const json& j) {
    std::set<std::string> s;
    auto scan = [&](const json& word) {
        if (!word.is_array()) return;
        for (const auto& letter : word)
            if (letter.is_array())
                for (const auto& p : letter)
                    if (p.is_string()) s.insert(p.get<std::string>());
    };
    if (j.is_object()) {
        if (j.contains("prefix")) scan(j["prefix"]);
        if (j.contains("cycle")) scan(j["cycle"]);
    } else {
        scan(j);
    }
    return {s.begin(), s.end()};
}

}  // namespace dltl
