#include "lcev/cli.hpp"

int main(int argc, char** argv) { return lcev::cli::run(argc, argv); }
