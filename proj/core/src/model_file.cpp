#include "qbat/model_file.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qbat {

namespace {

void validate_symbols(const expr::Node& ast, const ParamTable& params, const char* component) {
    for (const auto& sym : expr::free_symbols(ast)) {
        if (sym == "k") continue;
        if (!params.contains(sym)) {
            throw UnboundSymbolError(sym + std::string(" in ") + component);
        }
    }
}

}  // namespace

TwoBandSpec compile_model(const ModelDefinition& def) {
    if (!def.d0 || !def.d1 || !def.d2 || !def.d3) {
        throw ConfigError("model definition is missing a component expression");
    }
    if (def.params.contains("k")) {
        throw ConfigError("'k' is the momentum variable and cannot be a parameter");
    }
    validate_symbols(*def.d0, def.params, "d0");
    validate_symbols(*def.d1, def.params, "d1");
    validate_symbols(*def.d2, def.params, "d2");
    validate_symbols(*def.d3, def.params, "d3");

    auto d0 = def.d0;
    auto d1 = def.d1;
    auto d2 = def.d2;
    auto d3 = def.d3;
    ParamTable params = def.params;

    return TwoBandSpec(
        [d0, params](double k) { return expr::evaluate(*d0, k, params); },
        [d1, d2, d3, params](double k) {
            return BlochVector{expr::evaluate(*d1, k, params),
                               expr::evaluate(*d2, k, params),
                               expr::evaluate(*d3, k, params)};
        },
        params, "custom");
}

const ConfigEntry* ConfigSection::find(const std::string& key) const {
    for (const auto& e : entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

namespace {

std::string trim(const std::string& s, int* col_shift = nullptr) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (col_shift) *col_shift = static_cast<int>(b);
    return s.substr(b, e - b);
}

[[noreturn]] void config_fail(const std::string& msg, int line, int column) {
    throw ParseError(msg + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")",
                     0, line, column);
}

}  // namespace

ConfigFile parse_config(const std::string& text) {
    ConfigFile file;
    ConfigSection* current = nullptr;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        int shift = 0;
        std::string body = trim(line, &shift);
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']') config_fail("unterminated section header", line_no, shift + 1);
            std::string name = trim(body.substr(1, body.size() - 2));
            if (name.empty()) config_fail("empty section name", line_no, shift + 1);
            if (file.find(name) != nullptr) {
                config_fail("duplicate section [" + name + "]", line_no, shift + 1);
            }
            file.sections.push_back(ConfigSection{name, line_no, {}});
            current = &file.sections.back();
            continue;
        }

        auto eq = body.find('=');
        if (eq == std::string::npos) {
            config_fail("expected 'key = value'", line_no, shift + 1);
        }
        if (current == nullptr) {
            config_fail("assignment outside any [section]", line_no, shift + 1);
        }
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty()) config_fail("empty key", line_no, shift + 1);
        if (value.empty()) {
            config_fail("empty value for key '" + key + "'", line_no,
                        shift + static_cast<int>(eq) + 2);
        }
        if (current->find(key) != nullptr) {
            config_fail("duplicate key '" + key + "' in [" + current->name + "]", line_no,
                        shift + 1);
        }
        auto vstart = body.find_first_not_of(" \t", eq + 1);
        current->entries.push_back(ConfigEntry{key, value, line_no, shift + 1,
                                               shift + static_cast<int>(vstart) + 1});
    }
    return file;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

expr::NodePtr parse_component(const ConfigSection& section, const char* key, bool required) {
    const ConfigEntry* e = section.find(key);
    if (e == nullptr) {
        if (required) {
            config_fail("section [" + section.name + "] is missing key '" + key + "'",
                        section.line, 1);
        }
        return expr::make_number(0.0);
    }
    try {
        return expr::parse_expression(e->value);
    } catch (const ParseError& pe) {
        config_fail(std::string(pe.what()) + " in '" + key + "'", e->line,
                    e->value_column + static_cast<int>(pe.offset));
    }
}

}  // namespace

ModelDefinition model_from_section(const ConfigSection& section) {
    ModelDefinition def;
    def.d0 = parse_component(section, "d0", false);
    def.d1 = parse_component(section, "d1", true);
    def.d2 = parse_component(section, "d2", true);
    def.d3 = parse_component(section, "d3", true);

    for (const auto& e : section.entries) {
        if (e.key.rfind("param.", 0) != 0) continue;
        std::string name = e.key.substr(6);
        if (name.empty()) config_fail("empty parameter name", e.line, e.column);
        char* end = nullptr;
        double v = std::strtod(e.value.c_str(), &end);
        if (end == e.value.c_str() || *end != '\0') {
            config_fail("parameter '" + name + "' is not a number: '" + e.value + "'", e.line,
                        e.column);
        }
        def.params[name] = v;
    }
    return def;
}

QuenchSetup quench_from_config(const ConfigFile& file) {
    const ConfigSection* initial = file.find("initial");
    const ConfigSection* fin = file.find("final");
    if (initial == nullptr) throw ConfigError("config has no [initial] section");
    if (fin == nullptr) throw ConfigError("config has no [final] section");
    return QuenchSetup{compile_model(model_from_section(*initial)),
                       compile_model(model_from_section(*fin))};
}

}  // namespace qbat
