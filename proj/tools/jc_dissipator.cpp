// jc_dissipator: command-line driver; see `jc_dissipator --help`.

#include "jcdiss/commands.hpp"

int main(int argc, char** argv) { return jcdiss::run_cli(argc, argv); }
