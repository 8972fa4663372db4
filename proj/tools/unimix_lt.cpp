#include "unimix/commands.hpp"

int main(int argc, char** argv) { return unimix::run_cli(argc, argv); }
