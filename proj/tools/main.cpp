#include "cli.hpp"

int main(int argc, char** argv) { return pet_erg::cli::main(argc, argv); }
