#include "modsurf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "modsurf/numtheory.hpp"

namespace modsurf {

Config config_load(const std::string& path) {
    Config cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw Error("config_error", "cannot read config file: " + path);
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line.substr(0, line.find('#'));
        auto l = s.find_first_not_of(" \t");
        if (l == std::string::npos) continue;
        auto r = s.find_last_not_of(" \t");
        s = s.substr(l, r - l + 1);
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw Error("config_error", "expected key=value at line " + std::to_string(lineno));
        std::string key = s.substr(0, eq);
        std::string val = s.substr(eq + 1);
        auto trim = [](std::string& t) {
            auto a = t.find_first_not_of(" \t");
            auto b = t.find_last_not_of(" \t");
            t = a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
        };
        trim(key);
        trim(val);
        if (!seen.insert(key).second)
            throw Error("config_error", "duplicate key '" + key + "'");
        try {
            if (key == "q_bound")
                cfg.q_bound = static_cast<unsigned>(std::stoul(val));
            else if (key == "step")
                cfg.step = std::stod(val);
            else if (key == "fold_tol")
                cfg.fold_tol = std::stod(val);
            else if (key == "cut_tol")
                cfg.cut_tol = std::stod(val);
            else if (key == "workers")
                cfg.workers = static_cast<unsigned>(std::stoul(val));
            else
                throw Error("config_error", "unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw Error("config_error", "bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw Error("config_error", "bad value for '" + key + "'");
        }
    }
    return cfg;
}

}  // namespace modsurf
