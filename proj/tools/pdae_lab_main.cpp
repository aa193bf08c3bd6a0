#include "pdae/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    return pdae::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
