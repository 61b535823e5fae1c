#include "cli.hpp"

int main(int argc, char** argv) { return afrac::cli::run(argc, argv); }
