// Copyright 2026 The Horse Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "horse/cli.hpp"

int main(int argc, char** argv) { return horse::run_cli(argc, argv, std::cout, std::cerr); }
