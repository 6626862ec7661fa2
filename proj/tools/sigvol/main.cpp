#include <iostream>

#include "sigvol/app.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return sigvol::cli::execute(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
