#include "frac_hardy/cli.hpp"

int main(int argc, char** argv) { return frac_hardy::cli::main(argc, argv); }
