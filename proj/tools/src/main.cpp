#include <iostream>

#include "mchcli/cli.hpp"

int main(int argc, char** argv) { return mch::cli::dispatch(argc, argv, std::cout, std::cerr); }
