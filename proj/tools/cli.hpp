#pragma once

#include "hypdim/models.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hypdim::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalid = 2,
    kCapExceeded = 3,
    kInconclusive = 4,
};

/// name[:params], e.g. "horseshoe:3,0.25", "doubling:2", "cantor:3,02", "catmap", "golden".
/// Cantor kept digits may also be '/'-separated ("cantor:5,0/2/4") for slopes above 10.
ModelSystem parse_model_spec(const std::string& spec);

/// Runs one command line (without the program name). JSON goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypdim::cli
