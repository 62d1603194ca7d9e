#include "cli.hpp"

int main(int argc, char** argv) { return sh::cli::main(argc, argv); }
