#include "tfbench/cli.hpp"

int main(int argc, char** argv) { return tfbench::cli::dispatch(argc, argv); }
