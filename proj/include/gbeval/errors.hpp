#pragma once

#include <stdexcept>
#include <string>

namespace gbeval {

// Error classes map to the CLI exit-code contract:
// 0 success, 2 input (missing/unpaired/unreadable files),
// 3 data (dimension mismatch, invalid pixel content),
// 4 config (bad flags, schema violations, out-of-range parameters).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e)) return 2;
    if (dynamic_cast<const DataError*>(&e)) return 3;
    if (dynamic_cast<const ConfigError*>(&e)) return 4;
    return 1;
}

}  // namespace gbeval
