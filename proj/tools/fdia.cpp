#include "fdia/cli.hpp"

int main(int argc, char** argv) { return fdia::cli::cli_main(argc, argv); }
