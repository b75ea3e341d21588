#pragma once

// Flat run configuration for the command-line tool. Every key carries its
// unit in the name and defaults to the experiment's operating value. Values
// are validated and normalised on assignment, so the echo written into
// output headers is canonical.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fortsim/addressing.hpp"
#include "fortsim/experiments.hpp"
#include "fortsim/io.hpp"

namespace fortsim::cli {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : "config key '" + key + "': " + message),
          key_(std::move(key)) {}
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

enum class ValueKind {
    real,          // any finite number
    positive,      // > 0
    nonnegative,   // >= 0
    fraction,      // in [0, 1)
    count,         // integer >= 1
    seed,          // unsigned 64-bit integer
    flag,          // on | off
    choice,        // one of KeySpec::choices
    label,         // nonempty token without whitespace
    positive_list, // comma-separated numbers > 0
};

struct KeySpec {
    std::string name;
    ValueKind kind;
    std::string default_value;
    std::string description;
    std::vector<std::string> choices{};
};

const std::vector<KeySpec>& config_keys();

const std::vector<std::string>& command_names();

class RunConfig {
  public:
    RunConfig();

    // Throws ConfigError naming the key when it is unknown or the value is
    // invalid for its kind.
    void set(std::string_view key, std::string_view value);
    void apply(const KeyValues& kv);
    // "key=value" as given to --set.
    void apply_assignment(std::string_view assignment);

    const std::string& get(std::string_view key) const;
    double number(std::string_view key) const;
    std::int64_t integer(std::string_view key) const;
    std::uint64_t seed() const;
    bool flag(std::string_view key) const;
    std::vector<double> list(std::string_view key) const;

    // All keys in registry order with canonical values.
    const KeyValues& values() const { return values_; }

  private:
    KeyValues values_;
};

// Reads a config file; errors carry the offending key or line.
KeyValues read_config_file(const std::string& path);

// Library structs resolved from the flat keys. Throw ConfigError naming the
// key responsible when a combination is rejected.
ScanConfig scan_config(const RunConfig& cfg);
std::vector<double> rabi_grid(const RunConfig& cfg);
std::vector<double> crosstalk_grid(const RunConfig& cfg);
RamseyGridSpec ramsey_grid_spec(const RunConfig& cfg);
HeadlineInputs headline_inputs(const RunConfig& cfg);

}  // namespace fortsim::cli
