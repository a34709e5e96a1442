#include "monostark/cli.hpp"

int main(int argc, char** argv) { return monostark::run_cli(argc, argv); }
