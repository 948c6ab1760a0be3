#include "synteval/cli.hpp"

int main(int argc, char** argv) { return synteval::cli_main(argc, argv); }
