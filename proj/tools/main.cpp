// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "dpg/cli.hpp"

int main(int argc, char** argv) { return dpg::run_cli(argc, argv, std::cout, std::cerr); }
