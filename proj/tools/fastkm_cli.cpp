#include "fastkm/bench/cli.hpp"

int main(int argc, char** argv) { return fastkm::bench::cli_main(argc, argv); }
