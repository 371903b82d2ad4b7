#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbat/bloch.hpp"
#include "qbat/expr.hpp"

namespace qbat {

/// A two-band model given as four expression trees in k and named parameters.
struct ModelDefinition {
    expr::NodePtr d0;
    expr::NodePtr d1;
    expr::NodePtr d2;
    expr::NodePtr d3;
    ParamTable params;
};

/// Validates the definition (every symbol is "k" or a declared parameter;
/// "k" itself may not be declared as a parameter) and compiles it to a
/// TwoBandSpec whose evaluation runs the expression trees directly.
/// Throws UnboundSymbolError at compile time.
TwoBandSpec compile_model(const ModelDefinition& def);

/// One key/value assignment with its source position (1-based line/column).
struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
    int column = 0;        // where the key starts
    int value_column = 0;  // where the value starts
};

/// A named section of a model/sweep configuration file.
struct ConfigSection {
    std::string name;
    int line = 0;
    std::vector<ConfigEntry> entries;

    const ConfigEntry* find(const std::string& key) const;
};

/// Parsed configuration file: `[section]` headers followed by `key = value`
/// lines; `#` starts a comment; blank lines are ignored. Keys must be unique
/// within a section. Parse errors report line and column.
struct ConfigFile {
    std::vector<ConfigSection> sections;

    const ConfigSection* find(const std::string& name) const;
};

ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::string& path);  // IoError if unreadable

/// Builds a ModelDefinition from a `[initial]`/`[final]` style section:
/// keys d1, d2, d3 are required expression strings, d0 defaults to "0",
/// and `param.<name> = <float>` declares parameters.
ModelDefinition model_from_section(const ConfigSection& section);

/// Reads the `[initial]` and `[final]` sections of a configuration file
/// and compiles them into a QuenchSetup.
QuenchSetup quench_from_config(const ConfigFile& file);

}  // namespace qbat
