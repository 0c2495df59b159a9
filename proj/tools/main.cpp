// SPDX-License-Identifier: Apache-2.0
#include "vassoc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return vassoc::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
