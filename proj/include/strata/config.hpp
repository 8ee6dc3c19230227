#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace strata {

/// A block of `key = value` lines. The root block has empty kind and name;
/// `[kind name]` headers open named sections.
class ConfigSection {
public:
    ConfigSection() = default;
    ConfigSection(std::string kind, std::string name, std::size_t line)
        : kind_(std::move(kind)), name_(std::move(name)), line_(line) {}

    const std::string& kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    std::size_t line() const noexcept { return line_; }
    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

    void set(std::string key, std::string value, std::size_t line);
    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;

    std::string text(std::string_view key, std::string_view fallback) const;
    std::string require(std::string_view key) const;
    double number(std::string_view key, double fallback) const;
    std::uint64_t integer(std::string_view key, std::uint64_t fallback) const;
    bool flag(std::string_view key, bool fallback) const;
    /// Comma-separated list; missing key gives the fallback.
    std::vector<std::string> list(std::string_view key, std::vector<std::string> fallback = {}) const;
    std::vector<double> numbers(std::string_view key) const;

    /// Throws ConfigError naming the first key not in `known`.
    void reject_unknown(std::initializer_list<std::string_view> known) const;
    std::string where(std::string_view key) const;

private:
    std::string kind_;
    std::string name_;
    std::size_t line_ = 0;
    std::vector<std::pair<std::string, std::string>> entries_;
    std::vector<std::size_t> lines_;
};

struct Config {
    ConfigSection root;
    std::vector<ConfigSection> sections;

    /// `#` starts a comment; blank lines ignored.
    static Config parse(std::string_view text);
};

std::vector<std::string> split_list(std::string_view text, char sep = ',');
std::optional<bool> parse_bool(std::string_view text);

} // namespace strata
