#include <qfp/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return qfp::cli::run_cli(argc, argv, std::cout, std::cerr); }
