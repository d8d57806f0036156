#include "steerlab/cli.hpp"

int main(int argc, char** argv) { return steerlab::run_cli(argc, argv); }
