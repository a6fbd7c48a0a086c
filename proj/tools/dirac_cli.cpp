#include "dirac/cli/commands.hpp"

int main(int argc, char** argv) { return dirac::cli::cli_main(argc, argv); }
