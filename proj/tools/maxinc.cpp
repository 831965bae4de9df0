#include "maxinc/cli.hpp"

int main(int argc, char** argv) { return maxinc::run_cli(argc, argv); }
