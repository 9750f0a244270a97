#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

// Error taxonomy mirrored by the CLI exit codes:
//   config_error -> 2, numeric_error -> 3, bracket_error / contract_error -> 4.

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class bracket_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class contract_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace frontlab
