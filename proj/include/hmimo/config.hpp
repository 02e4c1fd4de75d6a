// SPDX-License-Identifier: Apache-2.0
//
// hmimo - hybrid precoding simulator for multi-user massive MIMO
// Copyright (C) 2026 The hmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hmimo/simulator.hpp"

namespace hmimo
{

struct ParsedConfig
{
    SimConfig config;
    std::vector<SweepSpec> sweeps;
};

// Flat key = value text with [section] headers ([model], [solver], [entropy],
// [sweep.NAME]) and '#' comments. Lists use [a, b, c]. Unknown keys raise
// ParseError with the line number; invariant violations raise ValidationError.
// An empty document yields the default scenario.
ParsedConfig parse_config_string(std::string_view text, const std::string &source = "<string>");
ParsedConfig parse_config(const std::string &path);

// Canonical text form: every field, fixed order, round-trip exact.
std::string write_config(const ParsedConfig &cfg);

// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string config_hash(const ParsedConfig &cfg);

} // namespace hmimo
