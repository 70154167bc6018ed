#include "cli.hpp"

int main(int argc, char** argv) { return langcomp::cli::run(argc, argv); }
