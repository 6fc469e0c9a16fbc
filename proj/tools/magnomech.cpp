#include "magnomech/cli.hpp"

int main(int argc, char** argv) { return magnomech::cli::main(argc, argv); }
