#include "forkjoin/cli.hpp"

int main(int argc, char** argv) { return forkjoin::run_cli(argc, argv); }
