#include <iostream>

#include "shortcalc/commands.hpp"

int main(int argc, char** argv) { return shortcalc::cli_main(argc, argv, std::cout, std::cerr); }
