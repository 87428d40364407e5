#include "newslens/cli.hpp"

int main(int argc, char **argv) { return newslens::cli::run(argc, argv); }
