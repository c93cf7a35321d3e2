#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace semisep {

// Diagnostic verbosity comes from the SEMISEP_LOG environment variable:
// "quiet" suppresses warnings, "debug" adds informational output.
inline int log_level() {
    static const int level = [] {
        const char* env = std::getenv("SEMISEP_LOG");
        if (!env) return 1;
        const std::string v(env);
        if (v == "quiet" || v == "0") return 0;
        if (v == "debug" || v == "2") return 2;
        return 1;
    }();
    return level;
}

inline void log_warn(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[semisep] warning: " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[semisep] " << msg << "\n";
}

}  // namespace semisep
