// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "qcps/cli.hpp"

int main(int argc, char** argv) { return qcps::run_cli(argc, argv, std::cout, std::cerr); }
