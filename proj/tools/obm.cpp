#include "obm/cli.hpp"

int main(int argc, char** argv) { return obm::cli::main(argc, argv); }
