#include "laqcc/toml.hpp"

#include <fstream>

#include "laqcc/errors.hpp"

namespace laqcc {

namespace {

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> read_flat_toml(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open file: " + path);
    }
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty() || line.front() == '[') {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("malformed line in " + path + ": " + line);
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') {
            val = val.substr(1, val.size() - 2);
        }
        out[key] = val;
    }
    return out;
}

}  // namespace laqcc
