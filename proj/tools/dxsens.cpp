#include "dxsens/cli.hpp"

int main(int argc, char** argv) { return dxsens::cli::run_cli(argc, argv); }
