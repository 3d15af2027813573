#include "matchdp/policies.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "matchdp/io.hpp"

namespace matchdp {

Threshold Threshold::finite(int t) {
    if (t < 0) throw ContractError("threshold must be >= 0, got " + std::to_string(t));
    return {t, false};
}

ThresholdPolicy::ThresholdPolicy(int half_width)
    : half_width_(half_width), entries_(static_cast<std::size_t>(2 * std::max(half_width, 0) + 1)) {
    if (half_width < 0) throw ContractError("threshold window half-width must be >= 0");
}

ThresholdPolicy ThresholdPolicy::constant(int half_width, Threshold t) {
    ThresholdPolicy p(half_width);
    for (int i = -half_width; i <= half_width; ++i) p.set(i, t);
    return p;
}

std::size_t ThresholdPolicy::slot(int i) const {
    if (!in_range(i)) {
        throw ContractError("threshold index " + std::to_string(i) + " outside stored window [-" +
                            std::to_string(half_width_) + ", " + std::to_string(half_width_) + "]");
    }
    return static_cast<std::size_t>(i + half_width_);
}

void ThresholdPolicy::set(int i, Threshold t) {
    if (!t.censored && t.value < 0) throw ContractError("threshold must be >= 0");
    entries_[slot(i)] = t;
}

void ThresholdPolicy::clear(int i) { entries_[slot(i)].reset(); }

std::optional<Threshold> ThresholdPolicy::get(int i) const {
    if (!in_range(i)) return std::nullopt;
    return entries_[slot(i)];
}

Threshold ThresholdPolicy::at(int i) const {
    const auto& e = entries_[slot(i)];
    if (!e) throw ContractError("threshold index " + std::to_string(i) + " has no stored value");
    return *e;
}

Matching threshold_action(const ThresholdPolicy& p, const State& x) {
    Matching m{std::min(x[0], x[1]), 0, std::min(x[2], x[3])};
    const int surplus = l2_surplus(x);
    if (surplus <= 0) return m;
    const Threshold t = p.at(threshold_index(x));
    if (!t.censored) m.l2 = std::max(surplus - t.value, 0);
    return m;
}

void write_thresholds_csv(std::ostream& os, const ThresholdPolicy& p) {
    os << "i,t_i\n";
    for (int i = -p.half_width(); i <= p.half_width(); ++i) {
        const auto t = p.get(i);
        if (!t) continue;
        os << i << ',';
        if (t->censored) {
            os << "inf";
        } else {
            os << t->value;
        }
        os << '\n';
    }
}

ThresholdPolicy read_thresholds_csv(std::istream& is) {
    std::vector<std::pair<int, Threshold>> rows;
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "i,t_i") {
                throw ConfigError("thresholds CSV line " + std::to_string(line_no) +
                                  ": expected header 'i,t_i'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("thresholds CSV line " + std::to_string(line_no) + ": expected two columns");
        }
        try {
            const int i = static_cast<int>(parse_integer(std::string_view(line).substr(0, comma)));
            const std::string_view value = std::string_view(line).substr(comma + 1);
            if (value == "inf") {
                rows.emplace_back(i, Threshold::infinite());
            } else {
                const long long t = parse_integer(value);
                if (t < 0) throw ConfigError("threshold must be >= 0");
                rows.emplace_back(i, Threshold::finite(static_cast<int>(t)));
            }
        } catch (const ConfigError& e) {
            throw ConfigError("thresholds CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header_seen) throw ConfigError("thresholds CSV: missing header 'i,t_i'");
    int half_width = 0;
    for (const auto& [i, t] : rows) half_width = std::max(half_width, std::abs(i));
    ThresholdPolicy p(half_width);
    for (const auto& [i, t] : rows) p.set(i, t);
    return p;
}

Baseline parse_baseline(const std::string& name) {
    if (name == "match_nothing") return Baseline::match_nothing;
    if (name == "full_greedy") return Baseline::full_greedy;
    if (name == "never_l2") return Baseline::never_l2;
    if (name == "l2_first") return Baseline::l2_first;
    throw ConfigError("unknown baseline policy '" + name + "'");
}

std::string to_string(Baseline b) {
    switch (b) {
        case Baseline::match_nothing: return "match_nothing";
        case Baseline::full_greedy: return "full_greedy";
        case Baseline::never_l2: return "never_l2";
        case Baseline::l2_first: return "l2_first";
    }
    return "unknown";
}

Matching baseline_action(Baseline b, const State& x) {
    switch (b) {
        case Baseline::match_nothing:
            return {};
        case Baseline::full_greedy:
            return {std::min(x[0], x[1]), std::max(l2_surplus(x), 0), std::min(x[2], x[3])};
        case Baseline::never_l2:
            return {std::min(x[0], x[1]), 0, std::min(x[2], x[3])};
        case Baseline::l2_first: {
            const int l2 = std::min(x[1], x[2]);
            return {std::min(x[0], x[1] - l2), l2, std::min(x[2] - l2, x[3])};
        }
    }
    return {};
}

}  // namespace matchdp
