// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cagmps {

// Exception categories map onto the CLI exit codes.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SelfCheckError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cagmps
