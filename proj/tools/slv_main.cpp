#include "slv/cli.hpp"

int main(int argc, char** argv) { return slv::run_cli(argc, argv); }
