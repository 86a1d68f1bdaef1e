#include "cli.hpp"

int main(int argc, char** argv) { return vpflab::cli::main_entry(argc, argv); }
