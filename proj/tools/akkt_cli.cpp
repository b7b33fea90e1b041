// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "akkt/cli.hpp"

int main(int argc, char** argv) { return akkt::cli::main_entry(argc, argv, std::cout, std::cerr); }
