#include "gcox/cli.hpp"

int main(int argc, char** argv) { return gcox::run_cli(argc, argv); }
