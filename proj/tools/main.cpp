#include "ranklab/cli.hpp"

int main(int argc, char** argv) { return ranklab::run_cli(argc, argv); }
