#include "compproc/cli.hpp"

int main(int argc, char** argv) { return compproc::cli::main(argc, argv); }
