#include "otto_kiln/cli.hpp"

int main(int argc, char** argv) { return otto_kiln::cli::run_command(argc, argv); }
