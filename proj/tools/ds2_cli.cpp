#include "ds2/cli.hpp"

int main(int argc, char **argv) { return ds2::run_cli(argc, argv); }
