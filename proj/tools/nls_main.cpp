#include "nls/cli_io.hpp"

int main(int argc, char** argv) { return nls::main_entry(argc, argv); }
