#pragma once

#include <string>
#include <vector>

#include "odot/cochain.hpp"

namespace odot {

// Session parameters shared by every CLI command.
struct SessionConfig {
    std::string input;
    bool prime_mode = false;
    long prime = 0;
    int bar_depth = 6;   // T
    int order = 3;       // K
    std::vector<int> degrees = {1};
    std::string strategy = "left";  // left | right
    std::string format = "human";   // human | machine
    int threads = 1;
};

// Reads the self-describing structure-constant record; Phi^{-1} is computed,
// never read. Malformed entries report file:line.
Drinfeld parse_input(const std::string& path);

struct RunResult {
    int exit_code = 0;
    std::string output;
};

// Commands: check | integrate | gauge | cohomology | selftest. Output is
// deterministic byte-for-byte for a fixed input and config.
RunResult run_command(const std::string& command, const SessionConfig& cfg);

// FNV-1a over a canonical serialization; used for reproducible digests.
std::string digest_derivation(const Drinfeld& A, const Derivation& d);

}  // namespace odot
