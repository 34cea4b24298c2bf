#include "cli.hpp"

int main(int argc, char** argv) { return permcycles::cli::run(argc, argv); }
