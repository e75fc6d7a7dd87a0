#include "membranes_cli/runner.hpp"

int main(int argc, char** argv) { return membranes::cli::run(argc, argv); }
