#include "strata/config.hpp"

#include "strata/dataset.hpp"
#include "strata/error.hpp"

#include <algorithm>
#include <charconv>

namespace strata {

namespace {

std::string_view strip(std::string_view s) {
    const auto ws = " \t\r";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

} // namespace

std::vector<std::string> split_list(std::string_view text, char sep) {
    std::vector<std::string> out;
    if (strip(text).empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        out.emplace_back(strip(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<bool> parse_bool(std::string_view text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    return std::nullopt;
}

void ConfigSection::set(std::string key, std::string value, std::size_t line) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].first == key) {
            entries_[i].second = std::move(value);
            lines_[i] = line;
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
    lines_.push_back(line);
}

bool ConfigSection::has(std::string_view key) const { return get(key).has_value(); }

std::optional<std::string> ConfigSection::get(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

std::string ConfigSection::where(std::string_view key) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first == key) return "line " + std::to_string(lines_[i]) + ", key '" + std::string(key) + "'";
    std::string s = "key '" + std::string(key) + "'";
    if (!kind_.empty()) s += " in [" + kind_ + " " + name_ + "]";
    return s;
}

std::string ConfigSection::text(std::string_view key, std::string_view fallback) const {
    return get(key).value_or(std::string(fallback));
}

std::string ConfigSection::require(std::string_view key) const {
    if (auto v = get(key)) return *v;
    throw ConfigError("missing required " + where(key));
}

double ConfigSection::number(std::string_view key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    auto n = parse_number(*v);
    if (!n) throw ConfigError(where(key) + ": '" + *v + "' is not a number");
    return *n;
}

std::uint64_t ConfigSection::integer(std::string_view key, std::uint64_t fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size())
        throw ConfigError(where(key) + ": '" + *v + "' is not a nonnegative integer");
    return out;
}

bool ConfigSection::flag(std::string_view key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (auto b = parse_bool(*v)) return *b;
    throw ConfigError(where(key) + ": '" + *v + "' is not a boolean");
}

std::vector<std::string> ConfigSection::list(std::string_view key, std::vector<std::string> fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    return split_list(*v);
}

std::vector<double> ConfigSection::numbers(std::string_view key) const {
    std::vector<double> out;
    for (const auto& item : list(key)) {
        auto n = parse_number(item);
        if (!n) throw ConfigError(where(key) + ": '" + item + "' is not a number");
        out.push_back(*n);
    }
    return out;
}

void ConfigSection::reject_unknown(std::initializer_list<std::string_view> known) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& key = entries_[i].first;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("line " + std::to_string(lines_[i]) + ": unknown key '" + key + "'");
    }
}

Config Config::parse(std::string_view text) {
    Config cfg;
    ConfigSection* current = &cfg.root;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
            auto inner = strip(line.substr(1, line.size() - 2));
            const auto space = inner.find_first_of(" \t");
            std::string kind(inner.substr(0, space));
            std::string name = space == std::string_view::npos ? std::string() : std::string(strip(inner.substr(space)));
            cfg.sections.emplace_back(std::move(kind), std::move(name), line_no);
            current = &cfg.sections.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        auto key = strip(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        current->set(std::string(key), std::string(strip(line.substr(eq + 1))), line_no);
    }
    return cfg;
}

} // namespace strata
