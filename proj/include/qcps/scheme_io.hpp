// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// Scheme description files and weight specifications.

#pragma once

#include <string>
#include <string_view>

#include "qcps/scheme.hpp"
#include "qcps/weights.hpp"

namespace qcps {

/// JSON text of a scheme; every number in the exactnum text syntax.
std::string scheme_to_json(const Scheme& s);
/// Throws ParseError (with byte offset) on malformed JSON or numbers, and
/// DomainError when the description is not a valid scheme.
Scheme scheme_from_json(std::string_view text);
Scheme load_scheme(const std::string& path);
void save_scheme(const Scheme& s, const std::string& path);

/// indicator | hat | hat:PEAK:VALUE | dome | dome:AMP | pl:X=V,X=V,...
/// Supports are taken from the window; pl breakpoints are given explicitly.
WeightFn parse_weight(std::string_view spec, const Interval& window);

}  // namespace qcps
