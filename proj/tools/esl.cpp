#include <iostream>

#include "esl/cli.hpp"

int main(int argc, char** argv) { return esl::cli::run(argc, argv, std::cout, std::cerr); }
