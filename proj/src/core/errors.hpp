// SPDX-License-Identifier: Apache-2.0
//
// vaairs - secure aerial relay simulator
// Copyright (C) 2026 vaairs developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#pragma once

#include <stdexcept>
#include <string>

namespace vaairs {

// Invalid or inconsistent configuration values, caught before any work runs.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// Mathematically degenerate inputs (coincident points, all-zero weights, ...).
class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string &msg) : std::runtime_error(msg) {}
};

// Failures while executing a run (I/O, dimension mismatches, bad checkpoints).
class RuntimeFailure : public std::runtime_error {
  public:
    explicit RuntimeFailure(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace vaairs
