#include "fdgmaa/cli.hpp"

int main(int argc, char** argv) { return fdgmaa::cli_main(argc, argv); }
