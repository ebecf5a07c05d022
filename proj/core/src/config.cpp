#include "omsq/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace omsq {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& text, int line_no) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos != text.size())
            throw ConfigError("trailing characters after number '" + text + "'",
                              line_no);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + text + "'", line_no);
    }
}

std::vector<double> parse_list(const std::string& text, int line_no) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("empty entry in list '" + text + "'", line_no);
        out.push_back(parse_number(item, line_no));
    }
    if (out.empty()) throw ConfigError("empty list", line_no);
    return out;
}

struct RawEntry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, RawEntry>;

const std::map<std::string, int>& sweep_keys() {
    // value: 0 = number, 1 = string, 2 = list
    static const std::map<std::string, int> keys = {
        {"name", 1},
        {"axis1", 1}, {"axis1_min", 0}, {"axis1_max", 0}, {"axis1_points", 0},
        {"axis1_scale", 1}, {"axis1_values", 2},
        {"axis2", 1}, {"axis2_min", 0}, {"axis2_max", 0}, {"axis2_points", 0},
        {"axis2_scale", 1}, {"axis2_values", 2},
        {"outputs", 1},
        {"oracle_fraction", 0},
        {"seed", 0},
    };
    return keys;
}

// Apply one parameter section.  Keys ending in _si are converted with
// omega_m_si, which must appear in the same section.
template <typename Params, typename SetterMap>
void apply_param_section(Params& params, const SetterMap& setters,
                         const Section& sec, bool physical) {
    double omega_m_si = 0.0;
    if (auto it = sec.find("omega_m_si"); it != sec.end())
        omega_m_si = parse_number(it->second.value, it->second.line);

    for (const auto& [key, entry] : sec) {
        if (key == "omega_m_si") {
            if constexpr (std::is_same_v<Params, PhysicalParams>)
                params.omega_m = omega_m_si;
            continue;
        }
        std::string field = key;
        bool si = false;
        if (field.size() > 3 && field.ends_with("_si")) {
            field = field.substr(0, field.size() - 3);
            si = true;
        }
        auto it = setters.find(field);
        if (it == setters.end())
            throw ConfigError("unknown key '" + key + "'", entry.line);
        double v = parse_number(entry.value, entry.line);
        if (si) {
            if (!(omega_m_si > 0.0))
                throw ConfigError("key '" + key +
                                      "' needs omega_m_si in the same section",
                                  entry.line);
            v /= omega_m_si;
        }
        it->second(params, v);
    }
    if (physical) {
        if constexpr (std::is_same_v<Params, PhysicalParams>) {
            if (!(params.omega_m > 0.0))
                throw ConfigError("[physical] requires omega_m_si");
        }
    }
}

SweepAxis parse_axis(const Section& sec, const std::string& prefix,
                     bool required) {
    SweepAxis axis;
    const auto get = [&](const std::string& suffix) -> const RawEntry* {
        auto it = sec.find(prefix + suffix);
        return it == sec.end() ? nullptr : &it->second;
    };
    const RawEntry* name = get("");
    if (!name) {
        if (required) throw ConfigError("[sweep] requires " + prefix);
        return axis;
    }
    axis.name = trim(name->value);
    if (const RawEntry* e = get("_values")) {
        axis.values = parse_list(e->value, e->line);
        axis.min = *std::min_element(axis.values.begin(), axis.values.end());
        axis.max = *std::max_element(axis.values.begin(), axis.values.end());
        axis.n_points = static_cast<int>(axis.values.size());
        return axis;
    }
    const RawEntry* mn = get("_min");
    const RawEntry* mx = get("_max");
    const RawEntry* np = get("_points");
    if (!mn || !mx || !np)
        throw ConfigError("[sweep] axis '" + axis.name +
                          "' needs _min, _max and _points (or _values)");
    axis.min = parse_number(mn->value, mn->line);
    axis.max = parse_number(mx->value, mx->line);
    axis.n_points = static_cast<int>(parse_number(np->value, np->line));
    if (const RawEntry* sc = get("_scale")) {
        const std::string s = trim(sc->value);
        if (s == "linear") axis.scale = AxisScale::linear;
        else if (s == "log") axis.scale = AxisScale::log;
        else throw ConfigError("unknown axis scale '" + s + "'", sc->line);
    }
    return axis;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

Config parse_config_text(const std::string& text) {
    Config cfg;
    cfg.raw = text;

    std::map<std::string, Section> sections;
    std::string current;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip inline comments: '#' or ';' at start or after whitespace
        for (size_t k = 0; k < line.size(); ++k) {
            if ((line[k] == '#' || line[k] == ';') &&
                (k == 0 || std::isspace(static_cast<unsigned char>(line[k - 1])))) {
                line.resize(k);
                break;
            }
        }
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("malformed section header '" + t + "'", line_no);
            current = trim(t.substr(1, t.size() - 2));
            if (current != "physical" && current != "effective" && current != "sweep")
                throw ConfigError("unknown section '" + current + "'", line_no);
            sections[current];
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + t + "'", line_no);
        if (current.empty())
            throw ConfigError("key outside of any section", line_no);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        auto [it, inserted] = sections[current].insert({key, {value, line_no}});
        if (!inserted)
            throw ConfigError("duplicate key '" + key + "'", line_no);
    }

    const bool has_phys = sections.count("physical") > 0;
    const bool has_eff = sections.count("effective") > 0;
    if (has_phys && has_eff)
        throw ConfigError("config must not contain both [physical] and [effective]");
    if (!has_phys && !has_eff)
        throw ConfigError("config needs a [physical] or [effective] section");

    if (has_phys) {
        cfg.mode = ConfigMode::physical;
        apply_param_section(cfg.physical, physical_field_setters(),
                            sections["physical"], true);
    } else {
        cfg.mode = ConfigMode::effective;
        apply_param_section(cfg.effective, effective_field_setters(),
                            sections["effective"], false);
    }

    if (auto sit = sections.find("sweep"); sit != sections.end()) {
        const Section& sec = sit->second;
        for (const auto& [key, entry] : sec)
            if (!sweep_keys().count(key))
                throw ConfigError("unknown key '" + key + "'", entry.line);

        SweepSpec spec;
        if (cfg.mode == ConfigMode::physical) spec.base = cfg.physical;
        else spec.base = cfg.effective;
        if (auto it = sec.find("name"); it != sec.end())
            spec.name = trim(it->second.value);
        spec.axes.push_back(parse_axis(sec, "axis1", true));
        SweepAxis ax2 = parse_axis(sec, "axis2", false);
        if (!ax2.name.empty()) spec.axes.push_back(ax2);
        if (auto it = sec.find("outputs"); it != sec.end())
            spec.outputs = parse_name_list(it->second.value);
        if (auto it = sec.find("oracle_fraction"); it != sec.end())
            spec.oracle_fraction = parse_number(it->second.value, it->second.line);
        if (auto it = sec.find("seed"); it != sec.end())
            spec.seed = static_cast<std::uint64_t>(
                parse_number(it->second.value, it->second.line));

        // axis fields must exist in the base parameter set
        for (const auto& ax : spec.axes) {
            const bool known =
                cfg.mode == ConfigMode::physical
                    ? physical_field_setters().count(ax.name) > 0
                    : effective_field_setters().count(ax.name) > 0;
            if (!known)
                throw ConfigError("axis references unknown field '" + ax.name + "'");
            if (ax.values.empty()) {
                if (ax.n_points < 2)
                    throw ConfigError("axis '" + ax.name + "' needs n_points >= 2");
                if (!(ax.min < ax.max))
                    throw ConfigError("axis '" + ax.name + "' needs min < max");
                if (ax.scale == AxisScale::log && !(ax.min > 0.0))
                    throw ConfigError("axis '" + ax.name +
                                      "' log scale needs min > 0");
            }
        }
        cfg.sweep = std::move(spec);
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace omsq
